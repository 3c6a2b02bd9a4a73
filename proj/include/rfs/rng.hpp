#pragma once

#include <cstdint>
#include <random>

namespace rfs {

/// splitmix64; used only to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic per-stream generator: stream k of a master seed is an
/// mt19937_64 seeded from splitmix64(seed, k). Streams with distinct
/// indices are statistically independent.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t streamIndex) {
  std::uint64_t s = seed ^ (0x5851f42d4c957f2dULL * (streamIndex + 1));
  const std::uint64_t derived = splitmix64(s);
  return std::mt19937_64(derived);
}

}  // namespace rfs
