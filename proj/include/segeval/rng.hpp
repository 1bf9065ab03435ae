#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace segeval {

/// Deterministic random source. Wraps std::mt19937_64 but performs all
/// variate conversions itself so that streams are reproducible across
/// standard library implementations (std::uniform_*_distribution is
/// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53-bit resolution. Consumes one engine draw.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Rejection sampling, unbiased; consumes a
  /// variable number of engine draws.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n <= 1) {
      return 0;
    }
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Exponential variate with unit rate.
  double exponential() { return -std::log1p(-uniform()); }

  /// Poisson variate via the exponential-race method: exact distribution,
  /// O(mean) draws. Fine for the particle counts used here (<= ~1e5).
  std::uint64_t poisson(double mean) {
    std::uint64_t n = 0;
    double acc = exponential();
    while (acc <= mean) {
      ++n;
      acc += exponential();
    }
    return n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace segeval
