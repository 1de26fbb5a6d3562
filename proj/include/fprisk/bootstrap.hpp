#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "fprisk/estimator.hpp"
#include "fprisk/ingest.hpp"
#include "fprisk/profile.hpp"
#include "fprisk/rng.hpp"

namespace fprisk {

struct BootstrapConfig {
  std::uint64_t iterations = 10'000;
  std::uint64_t seed = 0;
  /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
  unsigned threads = 1;
  /// Keep every replicate of the total risk (for diagnostics and tests).
  bool keep_replicates = false;
};

/// Resampled cells of one study.
struct CellCounts {
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t pos = 0;

  std::int64_t total() const { return fp + tn + pos; }
  bool operator==(const CellCounts&) const = default;
};

/// Exact binomial draw (Boost's BTRD / inversion sampler).
std::int64_t sample_binomial(std::int64_t trials, double prob, CounterRng& stream);

/// Multinomial(total; probs) by sequential conditional binomials: the first
/// cell, then the second given the first, remainder to the third.
/// Throws InvalidProbs unless probs are non-negative and sum to 1 within 1e-12.
CellCounts sample_multinomial(std::int64_t total, std::array<double, 3> probs,
                              CounterRng& stream);

/// Parametric resample of one study from its own observed cell proportions
/// (FP, TN, TP+FN), drawn from the stream keyed (seed, iteration, study_index).
CellCounts resample_study(const StudyRecord& study, std::uint64_t seed,
                          std::uint64_t iteration, std::uint64_t study_index);

/// All studies of one bootstrap iteration, as StudyRecords with resampled
/// counts (TP carries the combined positive cell, FN is 0).
std::vector<StudyRecord> resample_iteration(std::span<const StudyRecord> studies,
                                            std::uint64_t seed, std::uint64_t iteration);

struct SeSummary {
  double mean = 0.0;
  double se = 0.0;
  bool operator==(const SeSummary&) const = default;
};

/// Sample standard deviation with the B - 1 denominator, plus the mean.
/// Throws InsufficientReplicates for fewer than two values.
SeSummary summarize(std::span<const double> replicates);

struct BootstrapResult {
  std::uint64_t iterations = 0;
  std::uint64_t seed = 0;
  std::map<Disease, SeSummary> per_disease;
  std::map<std::pair<SubpopulationProfile, Disease>, SeSummary> per_pair;
  std::map<SubpopulationProfile, SeSummary> total;
  /// Filled only with BootstrapConfig::keep_replicates; indexed by iteration.
  std::map<SubpopulationProfile, std::vector<double>> total_replicates;

  bool operator==(const BootstrapResult&) const = default;
};

/// Resamples every study B times, recomputes pooled rates and every profile's
/// estimates from each replicate, and reports standard errors. Output is
/// bit-identical for equal (studies, schedule, profiles, iterations, seed)
/// whatever the thread count.
BootstrapResult run_bootstrap(std::span<const StudyRecord> studies,
                              const ScheduleConfig& schedule,
                              std::span<const SubpopulationProfile> profiles,
                              const BootstrapConfig& config);

/// Copies the bootstrap SEs onto a rate table / estimate (when present).
void attach_se(RateTable& rates, const BootstrapResult& result);
void attach_se(RiskEstimate& estimate, const BootstrapResult& result);

}  // namespace fprisk
