#include "fprisk/oracle_sim.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "fprisk/error.hpp"
#include "fprisk/rng.hpp"

namespace fprisk {

namespace {

// Lifetimes are split into fixed-size chunks, each with its own keyed stream,
// so the hit count is independent of how chunks are spread over threads.
constexpr std::uint64_t kChunk = 1 << 16;
constexpr std::uint64_t kStreamTag = 0x6f7261636c65ULL;

std::uint64_t simulate_chunk(const SimSpec& spec, std::uint64_t chunk) {
  CounterRng rng(spec.seed, kStreamTag, chunk);
  const std::uint64_t begin = chunk * kChunk;
  const std::uint64_t end = std::min(spec.lifetimes, begin + kChunk);
  std::uint64_t hits = 0;
  for (std::uint64_t life = begin; life < end; ++life) {
    bool hit = false;
    for (const auto& c : spec.components) {
      for (std::int64_t t = 0; t < c.occasions; ++t) {
        if (rng.uniform() < c.rate) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    hits += hit ? 1 : 0;
  }
  return hits;
}

}  // namespace

SimResult simulate_lifetimes(const SimSpec& spec) {
  if (spec.lifetimes < 1) {
    throw Error(ErrorCode::InvalidArgument, "lifetimes must be at least 1", 0, "lifetimes");
  }
  for (const auto& c : spec.components) {
    if (!(c.rate >= 0.0 && c.rate <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "rate must lie in [0, 1]", 0, "rate");
    }
    if (c.occasions < 0) {
      throw Error(ErrorCode::InvalidArgument, "occasions must be non-negative", 0, "occasions");
    }
  }

  const std::uint64_t chunks = (spec.lifetimes + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> hits(chunks, 0);
  unsigned workers = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : spec.threads;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));

  auto run = [&](unsigned w) {
    for (std::uint64_t c = w; c < chunks; c += workers) hits[c] = simulate_chunk(spec, c);
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  SimResult out;
  out.lifetimes = spec.lifetimes;
  for (auto h : hits) out.hits += h;
  out.hit_fraction = static_cast<double>(out.hits) / static_cast<double>(spec.lifetimes);
  out.mc_se = std::sqrt(out.hit_fraction * (1.0 - out.hit_fraction) /
                        static_cast<double>(spec.lifetimes));
  return out;
}

}  // namespace fprisk
