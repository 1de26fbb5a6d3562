#pragma once

#include <cstdint>
#include <limits>

namespace fprisk {

/// Counter-based 64-bit generator. A stream is identified by a key derived
/// from (seed, a, b); the n-th output is a bijective mix of key + n * gamma
/// (the SplitMix64 output function), so any stream can be reconstructed
/// without replaying others. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
      : key_(derive_key(seed, a, b)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * kGamma); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const { return counter_; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a,
                                            std::uint64_t b) {
    std::uint64_t k = mix(seed + kGamma);
    k = mix(k ^ mix(a + 2 * kGamma));
    k = mix(k ^ mix(b + 3 * kGamma));
    return k;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace fprisk
