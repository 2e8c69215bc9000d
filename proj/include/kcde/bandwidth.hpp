#pragma once

#include <span>
#include <string_view>

namespace kcde {

enum class BandwidthMethod { bgk, normal_reference, fixed };

std::string_view bandwidth_method_name(BandwidthMethod m);

struct BandwidthResult {
  double h = 0.0;
  BandwidthMethod method = BandwidthMethod::fixed;
  int iterations = 0;       ///< repetitions n* used by the BGK recursion
  bool converged = true;
  double a1 = 0.0;          ///< converged auxiliary bandwidth (BGK only)
};

struct BgkConfig {
  int recursion_depth = 7;        ///< l, must be >= 2
  double epsilon_rel = 1e-7;      ///< tolerance on a1, relative to sample std
  int max_repetitions = 50;
  int grid_bins = 1 << 14;        ///< power of two, >= 256
  double padding_fraction = 0.1;  ///< grid extends this fraction of the range
};

/// Rule-of-thumb bandwidth h = 1.06 * s * N^(-1/5), s the sample standard
/// deviation (N-1 divisor). Throws std::invalid_argument for N < 2 or a
/// constant sample.
BandwidthResult normal_reference_bandwidth(std::span<const double> sample);

/// Adaptive plug-in bandwidth h = (2*sqrt(pi)*N*G)^(-1/5) with the curvature
/// functional G = ||f''||^2 evaluated at a converged auxiliary bandwidth.
/// The auxiliary bandwidth is refined by the depth-l recursion over
/// derivative-norm functionals; the first pass is seeded with a normal
/// density matching the sample moments, later passes with the kernel
/// estimate at the previous auxiliary bandwidth. If the recursion does not
/// converge within max_repetitions the normal reference bandwidth is
/// returned with converged=false.
BandwidthResult bgk_bandwidth(std::span<const double> sample,
                              const BgkConfig& config = {});

/// ||d^j/dz^j of the Gaussian-kernel KDE with bandwidth a||^2, evaluated on
/// the binned cosine-series representation of the sample.
double density_derivative_norm(std::span<const double> sample, double a, int j,
                               const BgkConfig& config = {});

/// Unnormalized DCT-II: X_k = sum_i x_i cos(pi*k*(2i+1)/(2n)); n must be a
/// power of two. Exposed for testing against the direct-sum oracle.
void dct2_inplace(std::span<double> x);

}  // namespace kcde
