#pragma once

#include <cstdint>

// Deterministic RNG used by the synthetic generator and Monte-Carlo
// harnesses. splitmix64 is used instead of <random> engines/distributions so
// that identical seeds give identical byte streams on every platform and
// standard library.

namespace hhp {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint32_t next_u32() { return std::uint32_t(next() >> 32); }

  // Uniform in [0, n) via the multiply-high trick (bias < 2^-32, irrelevant
  // at the trial counts used here).
  std::uint64_t bounded(std::uint64_t n) {
    return std::uint64_t((__uint128_t(next()) * n) >> 64);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
};

}  // namespace hhp
