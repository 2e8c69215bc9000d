#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kcde {

enum class Family { gamma, gev, lognormal, weibull, normal };

inline constexpr std::array<Family, 5> all_families{
    Family::gamma, Family::gev, Family::lognormal, Family::weibull,
    Family::normal};

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);

/// A parametric distribution with validated parameters.
///
/// Families and parameters:
///   gamma(shape xi > 0, scale sigma > 0)
///   gev(shape xi, scale sigma > 0, location mu); support is
///     [mu - sigma/xi, inf) for xi > 0, all reals for xi = 0, and
///     (-inf, mu - sigma/xi] for xi < 0
///   lognormal(log-mean mu, log-std sigma > 0)
///   weibull(scale sigma > 0, shape xi > 0)
///   normal(mean, std > 0)
///
/// The CDF is the mathematical one on each family's support; callers that
/// need the precipitation convention of zero probability below zero clamp
/// at the estimator level.
class ParametricModel {
 public:
  static ParametricModel gamma(double shape, double scale);
  static ParametricModel gev(double shape, double scale, double location);
  static ParametricModel lognormal(double log_mean, double log_std);
  static ParametricModel weibull(double scale, double shape);
  static ParametricModel normal(double mean, double std_dev);

  double pdf(double z) const;
  double cdf(double z) const;

  /// Inverse CDF for u in (0,1). Closed form except for the gamma family,
  /// which uses bracketed root finding on the CDF.
  double quantile(double u) const;

  /// n reproducible draws. Gamma uses the Marsaglia-Tsang squeeze; the other
  /// families push uniform draws through the closed-form quantile.
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

  Family family() const { return family_; }
  std::span<const double> params() const { return {params_.data(), n_params_}; }
  int parameter_count() const { return static_cast<int>(n_params_); }
  std::string describe() const;

 private:
  ParametricModel(Family f, std::initializer_list<double> p);

  Family family_;
  std::array<double, 3> params_{};
  std::size_t n_params_ = 0;
};

/// Mean of a GEV model: mu + sigma*(Gamma(1-xi)-1)/xi for xi != 0, and
/// mu + sigma*euler_gamma at xi = 0. Defined for xi < 1 only.
double gev_mean(const ParametricModel& model);

struct FitReport {
  ParametricModel model;
  double nll = 0.0;
  double aic = 0.0;  ///< 2k + 2*nll
  double bic = 0.0;  ///< k*ln(n) + 2*nll
  std::size_t n = 0;
  int k = 0;
  bool converged = true;
};

/// Maximum-likelihood fit. Closed form for normal/lognormal, Newton on the
/// digamma equation for gamma, Nelder-Mead from moment/PWM starts for
/// weibull and GEV. Throws std::invalid_argument when the data violate the
/// family's domain or the sample is too small (n >= 5k).
FitReport fit_mle(std::span<const double> data, Family family);

double negative_log_likelihood(const ParametricModel& model,
                               std::span<const double> data);

struct SelectionResult {
  std::vector<FitReport> reports;       ///< one per family that fit
  std::vector<std::size_t> by_aic;      ///< indices into reports, best first
  std::vector<std::size_t> by_bic;
  std::vector<std::size_t> by_nll;
  std::vector<std::string> failures;    ///< families that failed, with reasons
};

/// Fits every requested family and ranks the successful fits by AIC, BIC and
/// NLL (ascending). Throws NumericalError only if every fit fails.
SelectionResult model_select(std::span<const double> data,
                             std::span<const Family> families);

}  // namespace kcde
