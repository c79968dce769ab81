#pragma once

#include <cstdint>
#include <vector>

namespace nsk {

// xoshiro256++ seeded through splitmix64. The standard library distributions
// are implementation-defined, so everything that feeds seeded tests or
// committed golden files goes through this generator instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi);

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Fair coin.
  bool coin();

  // True with probability p.
  bool chance(double p);

  // k distinct indices from [0, n), in draw order.
  std::vector<std::uint32_t> sample_distinct(std::uint32_t n, std::uint32_t k);

  // Derives an independent stream seed from (a, b).
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

 private:
  std::uint64_t state_[4];
};

}  // namespace nsk
