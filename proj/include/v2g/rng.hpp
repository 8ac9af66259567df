#pragma once

#include <cstdint>

namespace v2g {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen as the project-wide generator
// because the whole state is one 64-bit word, the stream is identical on every
// platform, and substreams can be derived by hashing (seed, label) pairs.
// Scenario files produced from a given seed are the canonical fixtures.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    // Modulo bias is < 2^-53 for the ranges used here (instance sizes).
    return next_u64() % n;
  }

  // Deterministic substream seed for (seed, label) pairs, e.g. one stream per
  // scenario id so scenarios can be sampled in any order or concurrently.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
    Rng h(seed ^ (0xA0761D6478BD642FULL + label * 0xE7037ED1A0B428DBULL));
    return h.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace v2g
