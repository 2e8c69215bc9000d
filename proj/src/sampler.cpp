#include "kcde/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kcde/errors.hpp"
#include "kcde/rng.hpp"

namespace kcde {

LookupTable build_lookup(const KcdeModel& model, std::size_t table_size) {
  if (table_size < 2) throw std::invalid_argument("lookup table needs L >= 2");
  const auto& sample = model.sample();

  LookupTable table;
  table.z_prime_min = std::max(std::numeric_limits<double>::epsilon(),
                               sample.front() - model.h());
  table.z_prime_max = sample.back() + model.h();

  table.z_grid.resize(table_size);
  const double step = (table.z_prime_max - table.z_prime_min) /
                      static_cast<double>(table_size - 1);
  for (std::size_t l = 0; l < table_size; ++l)
    table.z_grid[l] = table.z_prime_min + step * static_cast<double>(l);
  table.z_grid.back() = table.z_prime_max;

  table.u_grid = evaluate_cdf(model, table.z_grid);
  return table;
}

std::vector<double> simulate(const LookupTable& table, std::size_t n,
                             std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("simulate: n must be >= 1");
  if (table.size() < 2) throw std::invalid_argument("simulate: table too small");

  std::vector<double> out(n);
  Rng rng(seed);
  const auto& u_grid = table.u_grid;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    // First entry >= u; the nearest neighbor is that entry or its
    // predecessor. On a tie the lower index wins.
    const auto it = std::lower_bound(u_grid.begin(), u_grid.end(), u);
    std::size_t idx;
    if (it == u_grid.begin()) {
      idx = 0;
    } else if (it == u_grid.end()) {
      idx = u_grid.size() - 1;
    } else {
      const std::size_t hi = static_cast<std::size_t>(it - u_grid.begin());
      const std::size_t lo = hi - 1;
      idx = (u - u_grid[lo] <= u_grid[hi] - u) ? lo : hi;
    }
    out[i] = table.z_grid[idx];
  }
  return out;
}

double empirical_quantile(std::span<const double> sorted, double p) {
  const double n = static_cast<double>(sorted.size());
  const double pos = p * n + 0.5;  // 1-based Hazen position
  if (pos <= 1.0) return sorted.front();
  if (pos >= n) return sorted.back();
  const double fidx = std::floor(pos);
  const std::size_t lo = static_cast<std::size_t>(fidx) - 1;
  const double frac = pos - fidx;
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<std::pair<double, double>> qq_pairs(std::span<const double> a,
                                                std::span<const double> b) {
  if (a.empty() || b.empty()) throw InputError("qq_pairs: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  const std::size_t k = std::min(sa.size(), sb.size());
  std::vector<std::pair<double, double>> pairs(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(k);
    pairs[i] = {empirical_quantile(sa, p), empirical_quantile(sb, p)};
  }
  return pairs;
}

}  // namespace kcde
