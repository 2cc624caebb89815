#pragma once

#include <cstdint>

#include "sepeq/rational.hpp"

namespace sepeq {

// SplitMix64. Deterministic across platforms and standard libraries, which the
// reporting layer depends on; do not replace with <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) via 128-bit multiply (Lemire, unbiased-enough for
  // sampling; bias < 2^-64 is irrelevant for zero testing).
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = (unsigned __int128)next_u64() * bound;
    return (std::uint64_t)(m >> 64);
  }

  // Uniform integer in [lo, hi] inclusive.
  long between(long lo, long hi) {
    return lo + (long)below((std::uint64_t)(hi - lo + 1));
  }

  // Random rational with numerator in [-range, range], denominator in [1, range].
  mpq_class rational(long range) {
    mpq_class q(between(-range, range), between(1, range));
    q.canonicalize();
    return q;
  }

  // Random Gaussian rational: both components as above.
  GQ gaussian(long range) { return GQ(rational(range), rational(range)); }

  // Nonzero variant (resamples).
  GQ gaussian_nonzero(long range) {
    for (;;) {
      GQ g = gaussian(range);
      if (!g.is_zero()) return g;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace sepeq
