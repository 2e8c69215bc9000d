#pragma once

#include <array>
#include <string_view>

namespace kcde {

/// Smoothing kernel families. All densities are normalized so that they
/// integrate to one, which keeps the matching CDF steps saturating at one.
enum class Kernel {
  gaussian,
  exponential,
  epanechnikov,
  bitriangular,
  triweight,
  spherical,
  uniform,
};

inline constexpr std::array<Kernel, 7> all_kernels{
    Kernel::gaussian,     Kernel::exponential, Kernel::epanechnikov,
    Kernel::bitriangular, Kernel::triweight,   Kernel::spherical,
    Kernel::uniform};

/// True for kernels supported on [-1, 1]; false for gaussian/exponential.
bool has_compact_support(Kernel k);

/// Normalized kernel density K(u). Symmetric, maximal at 0, nonincreasing
/// in |u|. Throws std::domain_error on non-finite input.
double kernel_pdf(Kernel k, double u);

/// CDF kernel step: the integral of kernel_pdf from -inf to u. For compact
/// kernels this is exactly 0 for u <= -1 and exactly 1 for u >= 1.
double kernel_step(Kernel k, double u);

std::string_view kernel_name(Kernel k);

/// Parses a lowercase kernel name; throws std::invalid_argument on unknown
/// names.
Kernel kernel_from_name(std::string_view name);

}  // namespace kcde
