#include "kcde/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kcde/special.hpp"

namespace kcde {

namespace {

constexpr double kInvSqrtPi = 0.56418958354775628694807945156077;

double sgn(double u) { return u < 0.0 ? -1.0 : (u > 0.0 ? 1.0 : 0.0); }

void check_finite(double u) {
  if (!std::isfinite(u)) throw std::domain_error("kernel argument must be finite");
}

}  // namespace

bool has_compact_support(Kernel k) {
  return k != Kernel::gaussian && k != Kernel::exponential;
}

double kernel_pdf(Kernel k, double u) {
  check_finite(u);
  const double a = std::abs(u);
  switch (k) {
    case Kernel::gaussian:
      return kInvSqrtPi * std::exp(-u * u);
    case Kernel::exponential:
      return 0.5 * std::exp(-a);
    case Kernel::epanechnikov:
      return a > 1.0 ? 0.0 : 0.75 * (1.0 - u * u);
    case Kernel::bitriangular:
      return a > 1.0 ? 0.0 : 1.5 * (1.0 - a) * (1.0 - a);
    case Kernel::triweight: {
      if (a > 1.0) return 0.0;
      const double w = 1.0 - u * u;
      return (35.0 / 32.0) * w * w * w;
    }
    case Kernel::spherical:
      return a > 1.0 ? 0.0 : (4.0 / 3.0) * (1.0 - 1.5 * a + 0.5 * a * a * a);
    case Kernel::uniform:
      return a > 1.0 ? 0.0 : 0.5;
  }
  throw std::invalid_argument("unknown kernel");
}

double kernel_step(Kernel k, double u) {
  check_finite(u);
  if (has_compact_support(k)) {
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
  }
  switch (k) {
    case Kernel::gaussian:
      return 0.5 * (1.0 + special::erf(u));
    case Kernel::exponential:
      return sgn(u) * 0.5 * (1.0 - std::exp(-std::abs(u))) + 0.5;
    case Kernel::epanechnikov:
      return 0.75 * (u - u * u * u / 3.0 + 2.0 / 3.0);
    case Kernel::bitriangular:
      return 1.5 * (u * u * u / 3.0 - u * u * sgn(u) + u + 1.0 / 3.0);
    case Kernel::triweight: {
      const double u3 = u * u * u;
      const double u5 = u3 * u * u;
      const double u7 = u5 * u * u;
      return (35.0 / 32.0) * (u - u3 + 0.6 * u5 - u7 / 7.0 + 16.0 / 35.0);
    }
    case Kernel::spherical:
      // The closed form carries 3/8 as its constant; that is what makes the
      // step hit 1/2 at zero and 0/1 at the support edges.
      return (4.0 / 3.0) * (sgn(u) * (u * u - 6.0) * u * u / 8.0 + u + 3.0 / 8.0);
    case Kernel::uniform:
      return 0.5 * (u + 1.0);
  }
  throw std::invalid_argument("unknown kernel");
}

std::string_view kernel_name(Kernel k) {
  switch (k) {
    case Kernel::gaussian: return "gaussian";
    case Kernel::exponential: return "exponential";
    case Kernel::epanechnikov: return "epanechnikov";
    case Kernel::bitriangular: return "bitriangular";
    case Kernel::triweight: return "triweight";
    case Kernel::spherical: return "spherical";
    case Kernel::uniform: return "uniform";
  }
  throw std::invalid_argument("unknown kernel");
}

Kernel kernel_from_name(std::string_view name) {
  for (Kernel k : all_kernels)
    if (kernel_name(k) == name) return k;
  throw std::invalid_argument("unknown kernel name: " + std::string(name));
}

}  // namespace kcde
