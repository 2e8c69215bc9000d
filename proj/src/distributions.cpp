#include "kcde/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "kcde/errors.hpp"
#include "kcde/rng.hpp"
#include "kcde/special.hpp"

namespace kcde {

namespace {

using special::euler_gamma;
using special::pi;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGevZeroShape = 1e-8;  // below this the Gumbel branch is used

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

double gamma_fn(double a) { return std::exp(special::log_gamma(a)); }

// ---------------------------------------------------------------------------
// Nelder-Mead simplex minimizer for the 2-3 parameter likelihood surfaces.

struct NmResult {
  std::vector<double> x;
  double f = kInf;
  bool converged = false;
};

NmResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> x0, double step,
                     int max_iter = 2000, double tol = 1e-10) {
  const std::size_t d = x0.size();
  std::vector<std::vector<double>> pts(d + 1, std::vector<double>(x0.begin(), x0.end()));
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fv[i] = f(pts[i]);

  auto order = [&] {
    std::vector<std::size_t> idx(d + 1);
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> p2(d + 1);
    std::vector<double> f2(d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
      p2[i] = pts[idx[i]];
      f2[i] = fv[idx[i]];
    }
    pts = std::move(p2);
    fv = std::move(f2);
  };

  NmResult result;
  for (int iter = 0; iter < max_iter; ++iter) {
    order();
    if (std::abs(fv[d] - fv[0]) <= tol * (std::abs(fv[0]) + tol)) {
      result.converged = true;
      break;
    }
    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[i][j] / static_cast<double>(d);

    auto blend = [&](double coef) {
      std::vector<double> p(d);
      for (std::size_t j = 0; j < d; ++j)
        p[j] = centroid[j] + coef * (pts[d][j] - centroid[j]);
      return p;
    };

    const auto refl = blend(-1.0);
    const double f_refl = f(refl);
    if (f_refl < fv[0]) {
      const auto expd = blend(-2.0);
      const double f_expd = f(expd);
      if (f_expd < f_refl) {
        pts[d] = expd;
        fv[d] = f_expd;
      } else {
        pts[d] = refl;
        fv[d] = f_refl;
      }
    } else if (f_refl < fv[d - 1]) {
      pts[d] = refl;
      fv[d] = f_refl;
    } else {
      const auto contr = blend(f_refl < fv[d] ? -0.5 : 0.5);
      const double f_contr = f(contr);
      if (f_contr < std::min(f_refl, fv[d])) {
        pts[d] = contr;
        fv[d] = f_contr;
      } else {
        for (std::size_t i = 1; i <= d; ++i) {
          for (std::size_t j = 0; j < d; ++j)
            pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
          fv[i] = f(pts[i]);
        }
      }
    }
  }
  order();
  result.x = pts[0];
  result.f = fv[0];
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction and naming

std::string_view family_name(Family f) {
  switch (f) {
    case Family::gamma: return "gamma";
    case Family::gev: return "gev";
    case Family::lognormal: return "lognormal";
    case Family::weibull: return "weibull";
    case Family::normal: return "normal";
  }
  throw std::invalid_argument("unknown family");
}

Family family_from_name(std::string_view name) {
  for (Family f : all_families)
    if (family_name(f) == name) return f;
  throw std::invalid_argument("unknown family name: " + std::string(name));
}

ParametricModel::ParametricModel(Family f, std::initializer_list<double> p)
    : family_(f), n_params_(p.size()) {
  std::copy(p.begin(), p.end(), params_.begin());
}

ParametricModel ParametricModel::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("gamma: shape and scale must be positive");
  return {Family::gamma, {shape, scale}};
}

ParametricModel ParametricModel::gev(double shape, double scale, double location) {
  if (!(scale > 0.0)) throw std::invalid_argument("gev: scale must be positive");
  if (!std::isfinite(shape) || !std::isfinite(location))
    throw std::invalid_argument("gev: parameters must be finite");
  return {Family::gev, {shape, scale, location}};
}

ParametricModel ParametricModel::lognormal(double log_mean, double log_std) {
  if (!(log_std > 0.0)) throw std::invalid_argument("lognormal: log-std must be positive");
  if (!std::isfinite(log_mean))
    throw std::invalid_argument("lognormal: log-mean must be finite");
  return {Family::lognormal, {log_mean, log_std}};
}

ParametricModel ParametricModel::weibull(double scale, double shape) {
  if (!(scale > 0.0) || !(shape > 0.0))
    throw std::invalid_argument("weibull: scale and shape must be positive");
  return {Family::weibull, {scale, shape}};
}

ParametricModel ParametricModel::normal(double mean, double std_dev) {
  if (!(std_dev > 0.0)) throw std::invalid_argument("normal: std must be positive");
  if (!std::isfinite(mean)) throw std::invalid_argument("normal: mean must be finite");
  return {Family::normal, {mean, std_dev}};
}

std::string ParametricModel::describe() const {
  std::string s(family_name(family_));
  s += "(";
  for (std::size_t i = 0; i < n_params_; ++i) {
    if (i) s += ", ";
    s += std::to_string(params_[i]);
  }
  s += ")";
  return s;
}

// ---------------------------------------------------------------------------
// Densities and CDFs

double ParametricModel::pdf(double z) const {
  switch (family_) {
    case Family::gamma: {
      const double shape = params_[0], scale = params_[1];
      if (!(z > 0.0)) return 0.0;
      return std::exp((shape - 1.0) * std::log(z) - z / scale -
                      shape * std::log(scale) - special::log_gamma(shape));
    }
    case Family::gev: {
      const double shape = params_[0], scale = params_[1], loc = params_[2];
      const double u = (z - loc) / scale;
      double log_y;
      if (std::abs(shape) < kGevZeroShape) {
        log_y = -u;
      } else {
        const double w = 1.0 + shape * u;
        if (w <= 0.0) return 0.0;  // outside support
        log_y = -std::log1p(shape * u) / shape;
      }
      const double y = std::exp(log_y);
      return std::exp((shape + 1.0) * log_y - y) / scale;
    }
    case Family::lognormal: {
      const double mu = params_[0], sigma = params_[1];
      if (!(z > 0.0)) return 0.0;
      const double t = (std::log(z) - mu) / sigma;
      return std::exp(-0.5 * t * t) / (z * sigma * std::sqrt(2.0 * pi));
    }
    case Family::weibull: {
      const double scale = params_[0], shape = params_[1];
      if (!(z > 0.0)) return 0.0;
      const double t = z / scale;
      return (shape / scale) * std::pow(t, shape - 1.0) * std::exp(-std::pow(t, shape));
    }
    case Family::normal: {
      const double t = (z - params_[0]) / params_[1];
      return std::exp(-0.5 * t * t) / (params_[1] * std::sqrt(2.0 * pi));
    }
  }
  throw std::invalid_argument("unknown family");
}

double ParametricModel::cdf(double z) const {
  switch (family_) {
    case Family::gamma: {
      if (!(z > 0.0)) return 0.0;
      return special::gamma_p(params_[0], z / params_[1]);
    }
    case Family::gev: {
      const double shape = params_[0], scale = params_[1], loc = params_[2];
      const double u = (z - loc) / scale;
      if (std::abs(shape) < kGevZeroShape) return std::exp(-std::exp(-u));
      const double w = 1.0 + shape * u;
      if (w <= 0.0) return shape > 0.0 ? 0.0 : 1.0;
      return std::exp(-std::exp(-std::log1p(shape * u) / shape));
    }
    case Family::lognormal: {
      if (!(z > 0.0)) return 0.0;
      return special::normal_cdf((std::log(z) - params_[0]) / params_[1]);
    }
    case Family::weibull: {
      if (!(z > 0.0)) return 0.0;
      return -std::expm1(-std::pow(z / params_[0], params_[1]));
    }
    case Family::normal:
      return special::normal_cdf((z - params_[0]) / params_[1]);
  }
  throw std::invalid_argument("unknown family");
}

double ParametricModel::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("quantile: probability must be in (0, 1)");
  switch (family_) {
    case Family::gamma: {
      const double shape = params_[0], scale = params_[1];
      // Bracket then bisect on the CDF; the CDF is cheap and monotone.
      double lo = 0.0;
      double hi = scale * std::max(1.0, shape);
      while (cdf(hi) < u) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw NumericalError("gamma quantile: bracket overflow");
      }
      for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (cdf(mid) < u ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    case Family::gev: {
      const double shape = params_[0], scale = params_[1], loc = params_[2];
      const double g = -std::log(u);
      if (std::abs(shape) < kGevZeroShape) return loc - scale * std::log(g);
      return loc + scale * std::expm1(-shape * std::log(g)) / shape;
    }
    case Family::lognormal:
      return std::exp(params_[0] + params_[1] * special::normal_quantile(u));
    case Family::weibull: {
      const double scale = params_[0], shape = params_[1];
      return scale * std::pow(-std::log1p(-u), 1.0 / shape);
    }
    case Family::normal:
      return params_[0] + params_[1] * special::normal_quantile(u);
  }
  throw std::invalid_argument("unknown family");
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

// Marsaglia-Tsang squeeze for gamma(shape >= 1, scale 1).
double gamma_draw(Rng& rng, double shape) {
  if (shape < 1.0) {
    // Boost the shape by one and correct with a uniform power.
    const double y = gamma_draw(rng, shape + 1.0);
    return y * std::pow(rng.uniform01(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = special::normal_quantile(rng.uniform01());
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

std::vector<double> ParametricModel::sample(std::size_t n, std::uint64_t seed) const {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  std::vector<double> out(n);
  Rng rng(seed);
  if (family_ == Family::gamma) {
    for (double& v : out) v = gamma_draw(rng, params_[0]) * params_[1];
  } else {
    for (double& v : out) v = quantile(rng.uniform01());
  }
  return out;
}

double gev_mean(const ParametricModel& model) {
  if (model.family() != Family::gev)
    throw std::invalid_argument("gev_mean: model is not a GEV");
  const double shape = model.params()[0];
  const double scale = model.params()[1];
  const double loc = model.params()[2];
  if (shape >= 1.0)
    throw std::domain_error("gev_mean: undefined for shape >= 1");
  if (std::abs(shape) < 1e-12) return loc + scale * euler_gamma;
  // (Gamma(1-xi) - 1)/xi via expm1 of log-gamma; stable as xi -> 0.
  return loc + scale * std::expm1(special::log_gamma(1.0 - shape)) / shape;
}

// ---------------------------------------------------------------------------
// Likelihood and fitting

namespace {

double log_pdf_sum(const ParametricModel& m, std::span<const double> data) {
  double s = 0.0;
  switch (m.family()) {
    case Family::gamma: {
      const double shape = m.params()[0], scale = m.params()[1];
      const double base = -shape * std::log(scale) - special::log_gamma(shape);
      for (double z : data) {
        if (!(z > 0.0)) return -kInf;
        s += base + (shape - 1.0) * std::log(z) - z / scale;
      }
      return s;
    }
    case Family::gev: {
      const double shape = m.params()[0], scale = m.params()[1], loc = m.params()[2];
      const double log_scale = std::log(scale);
      for (double z : data) {
        const double u = (z - loc) / scale;
        double log_y;
        if (std::abs(shape) < kGevZeroShape) {
          log_y = -u;
        } else {
          const double w = 1.0 + shape * u;
          if (w <= 0.0) return -kInf;
          log_y = -std::log1p(shape * u) / shape;
        }
        s += (shape + 1.0) * log_y - std::exp(log_y) - log_scale;
      }
      return s;
    }
    case Family::lognormal: {
      const double mu = m.params()[0], sigma = m.params()[1];
      const double base = -std::log(sigma) - 0.5 * std::log(2.0 * pi);
      for (double z : data) {
        if (!(z > 0.0)) return -kInf;
        const double lz = std::log(z);
        const double t = (lz - mu) / sigma;
        s += base - lz - 0.5 * t * t;
      }
      return s;
    }
    case Family::weibull: {
      const double scale = m.params()[0], shape = m.params()[1];
      const double base = std::log(shape) - shape * std::log(scale);
      for (double z : data) {
        if (!(z > 0.0)) return -kInf;
        s += base + (shape - 1.0) * std::log(z) - std::pow(z / scale, shape);
      }
      return s;
    }
    case Family::normal: {
      const double mu = m.params()[0], sigma = m.params()[1];
      const double base = -std::log(sigma) - 0.5 * std::log(2.0 * pi);
      for (double z : data) {
        const double t = (z - mu) / sigma;
        s += base - 0.5 * t * t;
      }
      return s;
    }
  }
  throw std::invalid_argument("unknown family");
}

int family_parameter_count(Family f) { return f == Family::gev ? 3 : 2; }

void require_positive(std::span<const double> data, Family f) {
  for (double z : data)
    if (!(z > 0.0))
      throw std::invalid_argument(std::string(family_name(f)) +
                                  " fit requires strictly positive data");
}

FitReport make_report(ParametricModel model, std::span<const double> data,
                      bool converged) {
  FitReport r{std::move(model), 0.0, 0.0, 0.0, data.size(),
              0,               converged};
  r.k = r.model.parameter_count();
  r.nll = -log_pdf_sum(r.model, data);
  r.aic = 2.0 * r.k + 2.0 * r.nll;
  r.bic = r.k * std::log(static_cast<double>(r.n)) + 2.0 * r.nll;
  return r;
}

FitReport fit_gamma(std::span<const double> data) {
  require_positive(data, Family::gamma);
  const double mean = mean_of(data);
  double mean_log = 0.0;
  for (double z : data) mean_log += std::log(z);
  mean_log /= static_cast<double>(data.size());
  const double s = std::log(mean) - mean_log;
  if (!(s > 0.0))
    throw std::invalid_argument("gamma fit: degenerate sample (all values equal)");

  // Minka's closed-form start, then Newton on ln(shape) - digamma(shape) = s.
  double shape = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  bool converged = false;
  for (int i = 0; i < 100; ++i) {
    const double f = std::log(shape) - special::digamma(shape) - s;
    const double fp = 1.0 / shape - special::trigamma(shape);
    const double next = shape - f / fp;
    if (!(next > 0.0)) break;
    if (std::abs(next - shape) <= 1e-12 * shape) {
      shape = next;
      converged = true;
      break;
    }
    shape = next;
  }
  return make_report(ParametricModel::gamma(shape, mean / shape), data, converged);
}

FitReport fit_lognormal(std::span<const double> data) {
  require_positive(data, Family::lognormal);
  std::vector<double> logs(data.size());
  std::transform(data.begin(), data.end(), logs.begin(),
                 [](double z) { return std::log(z); });
  const double mu = mean_of(logs);
  const double sigma = population_std(logs, mu);
  if (!(sigma > 0.0))
    throw std::invalid_argument("lognormal fit: degenerate sample");
  return make_report(ParametricModel::lognormal(mu, sigma), data, true);
}

FitReport fit_normal(std::span<const double> data) {
  const double mu = mean_of(data);
  const double sigma = population_std(data, mu);
  if (!(sigma > 0.0)) throw std::invalid_argument("normal fit: degenerate sample");
  return make_report(ParametricModel::normal(mu, sigma), data, true);
}

FitReport fit_weibull(std::span<const double> data) {
  require_positive(data, Family::weibull);
  const double mean = mean_of(data);
  const double sd = population_std(data, mean);
  if (!(sd > 0.0)) throw std::invalid_argument("weibull fit: degenerate sample");

  // Moment start: shape from the cov via Justus' approximation.
  double shape0 = std::pow(sd / mean, -1.086);
  shape0 = std::clamp(shape0, 0.05, 50.0);
  const double scale0 = mean / gamma_fn(1.0 + 1.0 / shape0);

  auto objective = [&](std::span<const double> t) {
    const auto m = ParametricModel::weibull(std::exp(t[0]), std::exp(t[1]));
    return -log_pdf_sum(m, data);
  };
  const std::array<double, 2> start{std::log(scale0), std::log(shape0)};
  const auto nm = nelder_mead(objective, start, 0.1);
  return make_report(ParametricModel::weibull(std::exp(nm.x[0]), std::exp(nm.x[1])),
                     data, nm.converged);
}

FitReport fit_gev(std::span<const double> data) {
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  // Probability-weighted moments (Hosking) for the starting point.
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double j = static_cast<double>(i);
    b0 += sorted[i];
    b1 += sorted[i] * j / (n - 1.0);
    b2 += sorted[i] * j * (j - 1.0) / ((n - 1.0) * (n - 2.0));
  }
  b0 /= n;
  b1 /= n;
  b2 /= n;

  double shape0 = 0.0, scale0 = 0.0, loc0 = 0.0;
  const double c = (2.0 * b1 - b0) / (3.0 * b2 - b0) - std::log(2.0) / std::log(3.0);
  const double k = 7.8590 * c + 2.9554 * c * c;  // Hosking's k = -shape
  if (std::abs(k) < 1e-6) {
    scale0 = (2.0 * b1 - b0) / std::log(2.0);
    loc0 = b0 - scale0 * euler_gamma;
    shape0 = 0.0;
  } else {
    scale0 = (2.0 * b1 - b0) * k / (gamma_fn(1.0 + k) * (1.0 - std::pow(2.0, -k)));
    loc0 = b0 + scale0 * std::expm1(special::log_gamma(1.0 + k)) / k;
    shape0 = -k;
  }
  if (!(scale0 > 0.0)) {
    scale0 = population_std(data, b0);
    loc0 = b0;
    shape0 = 0.0;
  }

  auto objective = [&](std::span<const double> t) {
    const auto m = ParametricModel::gev(t[2], std::exp(t[1]), t[0]);
    return -log_pdf_sum(m, data);
  };
  const std::array<double, 3> start{loc0, std::log(scale0), shape0};
  auto nm = nelder_mead(objective, start, 0.05);
  return make_report(
      ParametricModel::gev(nm.x[2], std::exp(nm.x[1]), nm.x[0]), data,
      nm.converged && std::isfinite(nm.f));
}

}  // namespace

double negative_log_likelihood(const ParametricModel& model,
                               std::span<const double> data) {
  return -log_pdf_sum(model, data);
}

FitReport fit_mle(std::span<const double> data, Family family) {
  const int k = family_parameter_count(family);
  if (data.size() < static_cast<std::size_t>(5 * k))
    throw std::invalid_argument("fit_mle: need at least 5 observations per parameter");
  for (double z : data)
    if (!std::isfinite(z))
      throw std::invalid_argument("fit_mle: data contain non-finite values");
  switch (family) {
    case Family::gamma: return fit_gamma(data);
    case Family::gev: return fit_gev(data);
    case Family::lognormal: return fit_lognormal(data);
    case Family::weibull: return fit_weibull(data);
    case Family::normal: return fit_normal(data);
  }
  throw std::invalid_argument("unknown family");
}

SelectionResult model_select(std::span<const double> data,
                             std::span<const Family> families) {
  if (families.empty())
    throw std::invalid_argument("model_select: no families requested");
  SelectionResult result;
  for (Family f : families) {
    try {
      result.reports.push_back(fit_mle(data, f));
    } catch (const std::exception& e) {
      result.failures.push_back(std::string(family_name(f)) + ": " + e.what());
    }
  }
  if (result.reports.empty())
    throw NumericalError("model_select: every candidate family failed to fit");

  auto ranking = [&](auto key) {
    std::vector<std::size_t> idx(result.reports.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return key(result.reports[a]) < key(result.reports[b]);
    });
    return idx;
  };
  result.by_aic = ranking([](const FitReport& r) { return r.aic; });
  result.by_bic = ranking([](const FitReport& r) { return r.bic; });
  result.by_nll = ranking([](const FitReport& r) { return r.nll; });
  return result;
}

}  // namespace kcde
