#pragma once

#include <cstdint>
#include <random>

namespace rydlgt {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for work item `index` under a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) { return mix64(mix64(base) ^ mix64(index + 1)); }

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace rydlgt
