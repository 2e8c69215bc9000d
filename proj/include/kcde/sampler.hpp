#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kcde/estimator.hpp"

namespace kcde {

/// Monotone (z, u) table for inverse transform sampling. zGrid is uniform on
/// [z'min, z'max] with z'min = max(eps, min(sample) - h) and
/// z'max = max(sample) + h; uGrid holds the model CDF at those points.
struct LookupTable {
  std::vector<double> z_grid;
  std::vector<double> u_grid;
  double z_prime_min = 0.0;
  double z_prime_max = 0.0;

  std::size_t size() const { return z_grid.size(); }
};

LookupTable build_lookup(const KcdeModel& model, std::size_t table_size = 10000);

/// Draws n values: each uniform draw is matched to the nearest uGrid entry
/// (ties resolve to the lower index) and the paired zGrid value is returned.
std::vector<double> simulate(const LookupTable& table, std::size_t n,
                             std::uint64_t seed);

/// Matched empirical quantiles of two samples at probabilities (i - 0.5)/K,
/// K = min(|a|, |b|); pairs are nondecreasing in both coordinates.
std::vector<std::pair<double, double>> qq_pairs(std::span<const double> a,
                                                std::span<const double> b);

/// Empirical quantile at probability p (Hazen plotting position with linear
/// interpolation); sorted input.
double empirical_quantile(std::span<const double> sorted, double p);

}  // namespace kcde
