#pragma once

namespace kcde::special {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
inline constexpr double pi = 3.14159265358979323846264338327950288;

/// Gauss error function, absolute accuracy better than 1e-12 everywhere.
/// Computed through the regularized incomplete gamma function P(1/2, x^2).
double erf(double x);

/// Inverse of erf on (-1, 1).
double erf_inv(double y);

/// Standard normal CDF, accurate in both tails.
double normal_cdf(double x);

/// Standard normal quantile, p in (0, 1).
double normal_quantile(double p);

/// log Gamma(a) for a > 0 (Lanczos approximation, reflection for a < 0.5).
double log_gamma(double a);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a),
/// a > 0, x >= 0. Series for x < a + 1, continued fraction otherwise.
double gamma_p(double a, double x);

/// Unregularized lower incomplete gamma gamma(a, x).
double lower_incomplete_gamma(double a, double x);

double digamma(double x);
double trigamma(double x);

}  // namespace kcde::special
