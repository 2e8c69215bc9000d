#include "kcde/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include "kcde/errors.hpp"
#include "kcde/estimator.hpp"
#include "kcde/format.hpp"
#include "kcde/rng.hpp"
#include "kcde/sampler.hpp"

namespace kcde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ParametricModel model_from_json(const nlohmann::json& j) {
  const Family f = family_from_name(j.at("family").get<std::string>());
  const auto p = j.at("params").get<std::vector<double>>();
  switch (f) {
    case Family::gamma:
      if (p.size() == 2) return ParametricModel::gamma(p[0], p[1]);
      break;
    case Family::gev:
      if (p.size() == 3) return ParametricModel::gev(p[0], p[1], p[2]);
      break;
    case Family::lognormal:
      if (p.size() == 2) return ParametricModel::lognormal(p[0], p[1]);
      break;
    case Family::weibull:
      if (p.size() == 2) return ParametricModel::weibull(p[0], p[1]);
      break;
    case Family::normal:
      if (p.size() == 2) return ParametricModel::normal(p[0], p[1]);
      break;
  }
  throw InputError("experiment config: wrong parameter count for " +
                   std::string(family_name(f)));
}

// One (model, size, replicate) work unit fills rows for every
// (bandwidth method, kernel) combination.
void run_unit(const ExperimentConfig& cfg, std::size_t mi, std::size_t si,
              int rep, std::span<ExperimentRow> rows) {
  const auto& named = cfg.models[mi];
  const std::size_t n = cfg.sizes[si];
  const std::size_t n_bw = cfg.bandwidth_methods.size();
  const std::size_t n_k = cfg.kernels.size();

  for (std::size_t bi = 0; bi < n_bw; ++bi)
    for (std::size_t ki = 0; ki < n_k; ++ki) {
      auto& row = rows[bi * n_k + ki];
      row.model = named.name;
      row.n = n;
      row.kernel = cfg.kernels[ki];
      row.bw_method = cfg.bandwidth_methods[bi];
      row.replicate = rep;
      row.h = row.mse_kcde = row.mse_staircase = row.re = kNaN;
    }

  try {
    const auto sample = named.model.sample(n, derive_seed(cfg.seed, mi, si, rep, 0));
    const auto points =
        generate_test_points(sample, cfg.test_points, derive_seed(cfg.seed, mi, si, rep, 1));

    std::vector<double> truth(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
      truth[i] = named.model.cdf(points[i]);

    const StaircaseCdf staircase(sample);
    double mse_s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d = staircase(points[i]) - truth[i];
      mse_s += d * d;
    }
    mse_s /= static_cast<double>(points.size());

    const bool all_positive =
        *std::min_element(sample.begin(), sample.end()) > 0.0;

    for (std::size_t bi = 0; bi < n_bw; ++bi) {
      // The bandwidth depends on the sample only, not on the kernel; resolve
      // it once per method and reuse across kernels.
      BandwidthResult bw;
      switch (cfg.bandwidth_methods[bi]) {
        case BandwidthMethod::bgk:
          bw = bgk_bandwidth(sample, cfg.bgk);
          break;
        case BandwidthMethod::normal_reference:
          bw = normal_reference_bandwidth(sample);
          break;
        case BandwidthMethod::fixed:
          throw std::invalid_argument("experiment: fixed bandwidth has no rule");
      }
      for (std::size_t ki = 0; ki < n_k; ++ki) {
        auto model =
            KcdeModel::fit(sample, cfg.kernels[ki], BandwidthSpec::fixed(bw.h));
        if (all_positive) model = model.boundary_corrected();

        double mse_k = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
          const double d = model.cdf(points[i]) - truth[i];
          mse_k += d * d;
        }
        mse_k /= static_cast<double>(points.size());

        auto& row = rows[bi * n_k + ki];
        row.h = bw.h;
        row.mse_kcde = mse_k;
        row.mse_staircase = mse_s;
        row.re = mse_k / mse_s;
        row.bgk_fallback =
            cfg.bandwidth_methods[bi] == BandwidthMethod::bgk && !bw.converged;
      }
    }
  } catch (const std::exception&) {
    // Row values stay NaN; the grid keeps going.
  }
}

std::vector<ExperimentRow> run_impl(const ExperimentConfig& cfg, bool parallel) {
  if (cfg.models.empty() || cfg.sizes.empty() || cfg.kernels.empty() ||
      cfg.bandwidth_methods.empty() || cfg.replicates < 1 || cfg.test_points < 1)
    throw std::invalid_argument("experiment config: all counts must be >= 1");

  const std::size_t per_unit = cfg.bandwidth_methods.size() * cfg.kernels.size();
  const std::size_t n_units =
      cfg.models.size() * cfg.sizes.size() * static_cast<std::size_t>(cfg.replicates);
  std::vector<ExperimentRow> rows(n_units * per_unit);

  const std::int64_t total = static_cast<std::int64_t>(n_units);
  const auto work = [&](std::int64_t u) {
    const std::size_t reps = static_cast<std::size_t>(cfg.replicates);
    const std::size_t mi = static_cast<std::size_t>(u) / (cfg.sizes.size() * reps);
    const std::size_t rest = static_cast<std::size_t>(u) % (cfg.sizes.size() * reps);
    const std::size_t si = rest / reps;
    const int rep = static_cast<int>(rest % reps);
    run_unit(cfg, mi, si, rep,
             {rows.data() + static_cast<std::size_t>(u) * per_unit, per_unit});
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t u = 0; u < total; ++u) work(u);
  } else {
    for (std::int64_t u = 0; u < total; ++u) work(u);
  }
  return rows;
}

}  // namespace

std::vector<NamedModel> default_models() {
  std::vector<NamedModel> models;
  models.push_back({"GAM1", ParametricModel::gamma(1.0, 30.0)});
  models.push_back({"GAM2", ParametricModel::gamma(0.35, 40.0)});
  models.push_back({"LGN", ParametricModel::lognormal(2.0, 1.1)});
  models.push_back({"GEV1", ParametricModel::gev(0.25, 8.0, 15.0)});
  models.push_back({"GEV2", ParametricModel::gev(0.0, 18.0, 45.0)});
  models.push_back({"GEV3", ParametricModel::gev(-0.25, 30.0, 100.0)});
  models.push_back({"WBL", ParametricModel::weibull(15.0, 0.7)});
  return models;
}

std::vector<double> generate_test_points(std::span<const double> sample,
                                         std::size_t n_t, std::uint64_t seed) {
  if (sample.size() < 2) throw InputError("test points need a sample with >= 2 values");
  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  if (!(*hi > *lo)) throw InputError("test points need >= 2 distinct sample values");
  std::vector<double> points(n_t);
  Rng rng(seed);
  for (double& p : points) p = *lo + (*hi - *lo) * rng.uniform01();
  return points;
}

double mse_between(const std::function<double(double)>& cdf_a,
                   const std::function<double(double)>& cdf_b,
                   std::span<const double> points) {
  if (points.empty()) throw std::invalid_argument("mse_between: no points");
  double total = 0.0;
  for (double z : points) {
    const double d = cdf_a(z) - cdf_b(z);
    total += d * d;
  }
  return total / static_cast<double>(points.size());
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  return run_impl(config, true);
}

std::vector<ExperimentRow> run_experiment_serial(const ExperimentConfig& config) {
  return run_impl(config, false);
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("models")) {
      cfg.models.clear();
      for (const auto& m : j.at("models"))
        cfg.models.push_back({m.at("name").get<std::string>(), model_from_json(m)});
    }
    if (j.contains("sizes")) cfg.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    if (j.contains("replicates")) cfg.replicates = j.at("replicates").get<int>();
    if (j.contains("test_points")) cfg.test_points = j.at("test_points").get<std::size_t>();
    if (j.contains("kernels")) {
      cfg.kernels.clear();
      for (const auto& k : j.at("kernels"))
        cfg.kernels.push_back(kernel_from_name(k.get<std::string>()));
    }
    if (j.contains("bandwidth_methods")) {
      cfg.bandwidth_methods.clear();
      for (const auto& b : j.at("bandwidth_methods")) {
        const auto name = b.get<std::string>();
        if (name == "bgk") cfg.bandwidth_methods.push_back(BandwidthMethod::bgk);
        else if (name == "nrr")
          cfg.bandwidth_methods.push_back(BandwidthMethod::normal_reference);
        else throw InputError("unknown bandwidth method: " + name);
      }
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("bgk")) {
      const auto& b = j.at("bgk");
      if (b.contains("recursion_depth")) cfg.bgk.recursion_depth = b.at("recursion_depth").get<int>();
      if (b.contains("epsilon_rel")) cfg.bgk.epsilon_rel = b.at("epsilon_rel").get<double>();
      if (b.contains("max_repetitions")) cfg.bgk.max_repetitions = b.at("max_repetitions").get<int>();
      if (b.contains("grid_bins")) cfg.bgk.grid_bins = b.at("grid_bins").get<int>();
      if (b.contains("padding_fraction")) cfg.bgk.padding_fraction = b.at("padding_fraction").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed experiment config: ") + e.what());
  }
  return cfg;
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["models"] = nlohmann::ordered_json::array();
  for (const auto& m : models) {
    nlohmann::ordered_json jm;
    jm["name"] = m.name;
    jm["family"] = family_name(m.model.family());
    jm["params"] = std::vector<double>(m.model.params().begin(), m.model.params().end());
    j["models"].push_back(jm);
  }
  j["sizes"] = sizes;
  j["replicates"] = replicates;
  j["test_points"] = test_points;
  j["kernels"] = nlohmann::ordered_json::array();
  for (Kernel k : kernels) j["kernels"].push_back(kernel_name(k));
  j["bandwidth_methods"] = nlohmann::ordered_json::array();
  for (BandwidthMethod b : bandwidth_methods)
    j["bandwidth_methods"].push_back(bandwidth_method_name(b));
  j["seed"] = seed;
  j["bgk"] = {{"recursion_depth", bgk.recursion_depth},
              {"epsilon_rel", bgk.epsilon_rel},
              {"max_repetitions", bgk.max_repetitions},
              {"grid_bins", bgk.grid_bins},
              {"padding_fraction", bgk.padding_fraction}};
  return j;
}

std::string rows_to_csv(std::span<const ExperimentRow> rows) {
  std::string out = "model,n,kernel,bw_method,replicate,h,mse_k,mse_s,re\n";
  for (const auto& r : rows) {
    out += r.model;
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += kernel_name(r.kernel);
    out += ',';
    out += bandwidth_method_name(r.bw_method);
    out += ',';
    out += std::to_string(r.replicate);
    out += ',';
    out += format_double(r.h);
    out += ',';
    out += format_double(r.mse_kcde);
    out += ',';
    out += format_double(r.mse_staircase);
    out += ',';
    out += format_double(r.re);
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json summarize_experiment(std::span<const ExperimentRow> rows) {
  struct CellStats {
    std::vector<double> re;
    int fallbacks = 0;
    int failed = 0;
  };
  std::map<std::tuple<std::string, std::size_t, Kernel, BandwidthMethod>, CellStats>
      cells;
  for (const auto& r : rows) {
    auto& cell = cells[{r.model, r.n, r.kernel, r.bw_method}];
    if (std::isnan(r.re)) {
      ++cell.failed;
      continue;
    }
    cell.re.push_back(r.re);
    if (r.bgk_fallback) ++cell.fallbacks;
  }

  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (auto& [key, cell] : cells) {
    std::sort(cell.re.begin(), cell.re.end());
    nlohmann::ordered_json jc;
    jc["model"] = std::get<0>(key);
    jc["n"] = std::get<1>(key);
    jc["kernel"] = kernel_name(std::get<2>(key));
    jc["bw_method"] = bandwidth_method_name(std::get<3>(key));
    jc["replicates"] = cell.re.size();
    if (!cell.re.empty()) {
      jc["re_q1"] = empirical_quantile(cell.re, 0.25);
      jc["re_median"] = empirical_quantile(cell.re, 0.5);
      jc["re_q3"] = empirical_quantile(cell.re, 0.75);
    }
    jc["bgk_fallbacks"] = cell.fallbacks;
    jc["failed_replicates"] = cell.failed;
    out.push_back(jc);
  }
  return out;
}

}  // namespace kcde
