#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace failclust::rng {

// Draw helpers over std::mt19937_64 that do not depend on the standard
// library's distribution implementations, so seeded runs are reproducible
// across toolchains.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ stream);
}

/// Uniform in [0, bound), bound > 0.
inline std::uint64_t below(std::mt19937_64& g, std::uint64_t bound) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = kMax - kMax % bound;
  std::uint64_t x;
  do {
    x = g();
  } while (x >= limit);
  return x % bound;
}

/// Uniform integer in [lo, hi].
inline long between(std::mt19937_64& g, long lo, long hi) {
  return lo + static_cast<long>(below(g, static_cast<std::uint64_t>(hi - lo) + 1));
}

/// Uniform double in [0, 1).
inline double unit(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline bool chance(std::mt19937_64& g, double p) { return unit(g) < p; }

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& g) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(g, i)]);
}

}  // namespace failclust::rng
