#pragma once

#include <cstdint>
#include <random>

namespace ptmc {

/// 64-bit Mersenne Twister keyed by (seed, stream). Bounded and real draws
/// are computed here rather than through <random> distributions so streams
/// are identical across standard library implementations.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, n); n > 0. Lemire's multiply-and-reject method.
  std::uint64_t below(std::uint64_t n);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ptmc
