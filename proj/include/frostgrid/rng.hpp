#pragma once

#include <cstdint>

namespace frostgrid {

// Counter-based uniform generator used by Monte Carlo evaluation.
//
// The value for (seed, draw, slot) is
//   x = splitmix64(seed ^ (draw * 0x9E3779B97F4A7C15))
//   x = splitmix64(x ^ (slot * 0xBF58476D1CE4E5B9 + 1))
//   u = (x >> 11) * 2^-53
// so any draw can be produced independently of the others, in any order,
// on any thread.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t draw, std::uint64_t slot) {
  std::uint64_t x = splitmix64(seed ^ (draw * 0x9E3779B97F4A7C15ULL));
  return splitmix64(x ^ (slot * 0xBF58476D1CE4E5B9ULL + 1ULL));
}

/// Uniform on [0, 1).
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t draw, std::uint64_t slot) {
  return static_cast<double>(counter_hash(seed, draw, slot) >> 11) * 0x1.0p-53;
}

}  // namespace frostgrid
