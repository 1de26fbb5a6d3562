#pragma once

#include <cstdint>
#include <vector>

namespace fprisk {

struct SimComponent {
  double rate = 0.0;
  std::int64_t occasions = 0;
};

struct SimSpec {
  std::vector<SimComponent> components;
  std::uint64_t lifetimes = 1;
  std::uint64_t seed = 0;
  /// 0 means hardware concurrency. The result does not depend on it.
  unsigned threads = 0;
};

struct SimResult {
  std::uint64_t hits = 0;
  std::uint64_t lifetimes = 0;
  double hit_fraction = 0.0;
  double mc_se = 0.0;
};

/// Brute-force lifetime simulation: every occasion of every component is an
/// independent Bernoulli(rate) trial; a lifetime is a hit if any trial is
/// positive. Throws InvalidArgument on an invalid spec.
SimResult simulate_lifetimes(const SimSpec& spec);

}  // namespace fprisk
