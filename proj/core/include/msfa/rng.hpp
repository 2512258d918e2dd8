#pragma once

#include <cmath>
#include <cstdint>

namespace msfa {

// Counter-based generator: a stateless mix of (seed, counter words) so every
// draw is addressable and independent of traversal order.
namespace rng {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t z = seed + kGolden;
  z = mix(z ^ mix(a + kGolden));
  z = mix(z ^ mix(b + 2 * kGolden));
  z = mix(z ^ mix(c + 3 * kGolden));
  return z;
}

// Uniform in (0, 1); never returns exactly 0 so it is safe inside log().
inline double uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0) {
  const std::uint64_t h = hash(seed, a, b, c);
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two addressable uniforms.
inline double gaussian(std::uint64_t seed, std::uint64_t a,
                       std::uint64_t b = 0, std::uint64_t c = 0) {
  const double u1 = uniform(seed, a, b, 2 * c);
  const double u2 = uniform(seed, a, b, 2 * c + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace rng
}  // namespace msfa
