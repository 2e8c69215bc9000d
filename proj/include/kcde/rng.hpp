#pragma once

#include <cstdint>
#include <random>

namespace kcde {

/// SplitMix64 step; used for seed derivation so that every (cell, replicate)
/// in a grid gets a position-based stream independent of execution order.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a base seed and an index path.
template <typename... Ix>
std::uint64_t derive_seed(std::uint64_t base, Ix... indices) {
  std::uint64_t s = base;
  std::uint64_t out = splitmix64(s);
  ((s ^= static_cast<std::uint64_t>(indices) + 0x9E3779B97F4A7C15ULL,
    out = splitmix64(s)),
   ...);
  return out;
}

/// Deterministic uniform generator. Draws are produced from raw mt19937_64
/// output rather than std::uniform_real_distribution, whose sequence is
/// implementation-defined; the same seed gives the same stream on every
/// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0,1); never returns 0 or 1, so draws are
  /// safe to pass through log/quantile transforms.
  double uniform01() {
    const std::uint64_t bits = engine_() >> 11;  // 53 random bits
    return (static_cast<double>(bits) + 0.5) * 0x1p-53;
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kcde
