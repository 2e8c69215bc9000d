#include "kcde/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kcde/special.hpp"

namespace kcde {

namespace {

using special::pi;

double sample_std(std::span<const double> sample) {
  const double n = static_cast<double>(sample.size());
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : sample) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

// Iterative radix-2 complex FFT, in place. n is a power of two.
void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * pi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

double double_factorial(int m) {
  double r = 1.0;
  for (; m > 1; m -= 2) r *= static_cast<double>(m);
  return r;
}

// ||phi_sigma^(j)||^2 for the normal density: (2j-1)!! / (2^(j+1) sqrt(pi) sigma^(2j+1)).
double gaussian_derivative_norm(int j, double sigma) {
  return double_factorial(2 * j - 1) /
         (std::pow(2.0, j + 1) * std::sqrt(pi) * std::pow(sigma, 2 * j + 1));
}

void validate_config(const BgkConfig& cfg) {
  if (cfg.recursion_depth < 2)
    throw std::invalid_argument("bgk: recursion depth must be >= 2");
  if (cfg.grid_bins < 256 || (cfg.grid_bins & (cfg.grid_bins - 1)) != 0)
    throw std::invalid_argument("bgk: grid_bins must be a power of two >= 256");
  if (!(cfg.padding_fraction >= 0.0 && cfg.padding_fraction <= 1.0))
    throw std::invalid_argument("bgk: padding_fraction must be in [0, 1]");
  if (!(cfg.epsilon_rel > 0.0))
    throw std::invalid_argument("bgk: epsilon_rel must be positive");
  if (cfg.max_repetitions < 1)
    throw std::invalid_argument("bgk: max_repetitions must be >= 1");
}

// Cosine-series representation of the binned sample on a padded grid.
// Derivative norms of the Gaussian-smoothed density become weighted sums
// over the squared coefficients: smoothing multiplies mode k by
// exp(-(pi k s)^2 / 2) and differentiation by powers of (pi k).
class SpectralDensity {
 public:
  SpectralDensity(std::span<const double> sample, const BgkConfig& cfg) {
    const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
    const double range = *hi_it - *lo_it;
    if (!(range > 0.0))
      throw std::invalid_argument("bgk: sample is constant");
    const double lo = *lo_it - cfg.padding_fraction * range;
    const double hi = *hi_it + cfg.padding_fraction * range;
    width_ = hi - lo;

    const std::size_t n = static_cast<std::size_t>(cfg.grid_bins);
    std::vector<double> hist(n, 0.0);
    const double inv_cell = static_cast<double>(n) / width_;
    for (double v : sample) {
      auto idx = static_cast<std::size_t>((v - lo) * inv_cell);
      if (idx >= n) idx = n - 1;  // right edge lands in the last bin
      hist[idx] += 1.0;
    }
    const double total = static_cast<double>(sample.size());
    for (double& w : hist) w /= total;

    dct2_inplace(hist);
    // c_k^2 with c_k the orthonormal-cosine coefficient: c_k = sqrt(2) X_k.
    coef2_.resize(n - 1);
    log_k_.resize(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
      coef2_[k - 1] = 2.0 * hist[k] * hist[k];
      log_k_[k - 1] = std::log(pi * static_cast<double>(k));
    }
  }

  /// ||f_a^(j)||^2 in data units for Gaussian smoothing bandwidth a.
  double derivative_norm(double a, int j) const {
    const double s = a / width_;
    const double damp = pi * pi * s * s;
    // exp arguments below ~ -745 underflow to zero; cut the tail there.
    double sum = 0.0;
    for (std::size_t i = 0; i < coef2_.size(); ++i) {
      if (coef2_[i] == 0.0) continue;
      const double k = static_cast<double>(i + 1);
      const double expo = 2.0 * j * log_k_[i] - damp * k * k;
      if (damp * k * k > 745.0) break;
      sum += coef2_[i] * std::exp(expo);
    }
    return sum / std::pow(width_, 2 * j + 1);
  }

 private:
  double width_ = 0.0;
  std::vector<double> coef2_;
  std::vector<double> log_k_;
};

}  // namespace

void dct2_inplace(std::span<double> x) {
  const std::size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("dct2: length must be a power of two");
  // Makhoul's permutation: even indices ascending, odd indices descending.
  std::vector<std::complex<double>> v(n);
  for (std::size_t i = 0; i < n / 2; ++i) {
    v[i] = x[2 * i];
    v[n - 1 - i] = x[2 * i + 1];
  }
  fft(v);
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = -pi * static_cast<double>(k) / (2.0 * static_cast<double>(n));
    x[k] = v[k].real() * std::cos(ang) - v[k].imag() * std::sin(ang);
  }
}

std::string_view bandwidth_method_name(BandwidthMethod m) {
  switch (m) {
    case BandwidthMethod::bgk: return "bgk";
    case BandwidthMethod::normal_reference: return "nrr";
    case BandwidthMethod::fixed: return "fixed";
  }
  throw std::invalid_argument("unknown bandwidth method");
}

BandwidthResult normal_reference_bandwidth(std::span<const double> sample) {
  if (sample.size() < 2)
    throw std::invalid_argument("normal reference bandwidth needs N >= 2");
  const double s = sample_std(sample);
  if (!(s > 0.0))
    throw std::invalid_argument("normal reference bandwidth: sample is constant");
  const double n = static_cast<double>(sample.size());
  return {1.06 * s * std::pow(n, -0.2), BandwidthMethod::normal_reference, 0,
          true, 0.0};
}

double density_derivative_norm(std::span<const double> sample, double a, int j,
                               const BgkConfig& config) {
  validate_config(config);
  if (!(a > 0.0)) throw std::invalid_argument("derivative norm: bandwidth must be positive");
  if (j < 1 || j > config.recursion_depth + 1)
    throw std::invalid_argument("derivative norm: order out of range");
  return SpectralDensity(sample, config).derivative_norm(a, j);
}

BandwidthResult bgk_bandwidth(std::span<const double> sample,
                              const BgkConfig& config) {
  validate_config(config);
  if (sample.size() < 10)
    throw std::invalid_argument("bgk bandwidth needs N >= 10");
  const double sd = sample_std(sample);
  if (!(sd > 0.0)) throw std::invalid_argument("bgk bandwidth: sample is constant");

  const SpectralDensity spectral(sample, config);
  const double n = static_cast<double>(sample.size());
  const int l = config.recursion_depth;
  const double eps = config.epsilon_rel * sd;

  // Formal start of the auxiliary sequence; the first pass replaces it with
  // the moment-matched normal seed below.
  double a1 = std::numeric_limits<double>::epsilon();
  double a1_prev = 0.0;
  bool have_prev = false;

  for (int rep = 0; rep < config.max_repetitions; ++rep) {
    double curvature = (rep == 0) ? gaussian_derivative_norm(l + 1, sd)
                                  : spectral.derivative_norm(a1_prev, l + 1);
    double aj = 0.0;
    for (int j = l; j >= 1; --j) {
      const double numer =
          (1.0 + std::pow(2.0, -(j + 0.5))) / 3.0 * double_factorial(2 * j - 1);
      const double denom = n * std::sqrt(pi / 2.0) * curvature;
      aj = std::sqrt(std::pow(numer / denom, 2.0 / (2.0 * j + 3.0)));
      if (j > 1) curvature = spectral.derivative_norm(aj, j);
    }
    a1 = aj;
    if (have_prev && std::abs(a1 - a1_prev) < eps) {
      const double g2 = spectral.derivative_norm(a1, 2);
      const double h = std::pow(2.0 * std::sqrt(pi) * n * g2, -0.2);
      return {h, BandwidthMethod::bgk, rep, true, a1};
    }
    a1_prev = a1;
    have_prev = true;
  }

  // Did not settle: fall back to the rule of thumb but keep the diagnostics.
  BandwidthResult fallback = normal_reference_bandwidth(sample);
  fallback.method = BandwidthMethod::bgk;
  fallback.iterations = config.max_repetitions;
  fallback.converged = false;
  fallback.a1 = a1;
  return fallback;
}

}  // namespace kcde
