#include "fprisk/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include <boost/random/binomial_distribution.hpp>

#include "fprisk/error.hpp"

namespace fprisk {

namespace {

// Second cell drawn conditionally on the first; `conditional` is
// P(cell 2 | not cell 1).
CellCounts sample_sequential(std::int64_t total, double first, double conditional,
                             CounterRng& stream) {
  CellCounts out;
  out.fp = sample_binomial(total, first, stream);
  out.tn = sample_binomial(total - out.fp, conditional, stream);
  out.pos = total - out.fp - out.tn;
  return out;
}

unsigned worker_count(unsigned requested, std::uint64_t iterations) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::uint64_t>(n, iterations));
}

}  // namespace

std::int64_t sample_binomial(std::int64_t trials, double prob, CounterRng& stream) {
  if (trials <= 0 || prob <= 0.0) return 0;
  if (prob >= 1.0) return trials;
  boost::random::binomial_distribution<std::int64_t, double> dist(trials, prob);
  return dist(stream);
}

CellCounts sample_multinomial(std::int64_t total, std::array<double, 3> probs,
                              CounterRng& stream) {
  if (total < 0) {
    throw Error(ErrorCode::InvalidArgument, "multinomial total must be non-negative");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::InvalidProbs, "cell probabilities must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidProbs,
                "cell probabilities sum to " + std::to_string(sum) + ", not 1");
  }
  const double rest = probs[1] + probs[2];
  const double conditional = rest > 0.0 ? std::clamp(probs[1] / rest, 0.0, 1.0) : 0.0;
  return sample_sequential(total, probs[0], conditional, stream);
}

CellCounts resample_study(const StudyRecord& study, std::uint64_t seed,
                          std::uint64_t iteration, std::uint64_t study_index) {
  CounterRng stream(seed, iteration, study_index);
  const std::int64_t total = study.total();
  const std::int64_t rest = study.tn + study.positives();
  const double first = static_cast<double>(study.fp) / static_cast<double>(total);
  const double conditional =
      rest > 0 ? static_cast<double>(study.tn) / static_cast<double>(rest) : 0.0;
  return sample_sequential(total, first, conditional, stream);
}

std::vector<StudyRecord> resample_iteration(std::span<const StudyRecord> studies,
                                            std::uint64_t seed, std::uint64_t iteration) {
  std::vector<StudyRecord> out;
  out.reserve(studies.size());
  for (std::size_t s = 0; s < studies.size(); ++s) {
    const CellCounts c = resample_study(studies[s], seed, iteration, s);
    StudyRecord r = studies[s];
    r.tp = c.pos;
    r.fn = 0;
    r.tn = c.tn;
    r.fp = c.fp;
    out.push_back(std::move(r));
  }
  return out;
}

SeSummary summarize(std::span<const double> replicates) {
  if (replicates.size() < 2) {
    throw Error(ErrorCode::InsufficientReplicates,
                "need at least 2 replicates, got " + std::to_string(replicates.size()));
  }
  double sum = 0.0;
  for (double x : replicates) sum += x;
  const double mean = sum / static_cast<double>(replicates.size());
  double ss = 0.0;
  for (double x : replicates) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(replicates.size() - 1))};
}

BootstrapResult run_bootstrap(std::span<const StudyRecord> studies,
                              const ScheduleConfig& schedule,
                              std::span<const SubpopulationProfile> profiles,
                              const BootstrapConfig& config) {
  if (config.iterations < 2) {
    throw Error(ErrorCode::InsufficientReplicates, "bootstrap needs at least 2 iterations");
  }
  const std::uint64_t B = config.iterations;

  // Point estimates first: surfaces MissingRate / ZeroDenominator up front.
  const RateTable base_rates = pool_all(studies);
  std::vector<std::vector<ResolvedOccasions>> resolved;
  resolved.reserve(profiles.size());
  for (const auto& p : profiles) {
    resolved.push_back(resolve_profile(p, schedule));
    estimate_resolved(p, resolved.back(), base_rates);
  }

  std::vector<Disease> diseases;
  for (const auto& [d, rate] : base_rates) diseases.push_back(d);
  std::array<int, kDiseaseCount> slot{};
  slot.fill(-1);
  for (std::size_t k = 0; k < diseases.size(); ++k) {
    slot[static_cast<std::size_t>(diseases[k])] = static_cast<int>(k);
  }

  std::vector<std::vector<double>> rate_reps(diseases.size(), std::vector<double>(B));
  std::vector<std::vector<std::vector<double>>> pair_reps(profiles.size());
  std::vector<std::vector<double>> total_reps(profiles.size(), std::vector<double>(B));
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    pair_reps[i].assign(resolved[i].size(), std::vector<double>(B));
  }

  std::mutex error_mutex;
  std::uint64_t error_iteration = B;
  std::exception_ptr error;

  auto run_block = [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<std::int64_t> fp(diseases.size());
    std::vector<std::int64_t> n(diseases.size());
    for (std::uint64_t b = begin; b < end; ++b) {
      try {
        std::fill(fp.begin(), fp.end(), 0);
        std::fill(n.begin(), n.end(), 0);
        for (std::size_t s = 0; s < studies.size(); ++s) {
          const CellCounts c = resample_study(studies[s], config.seed, b, s);
          const auto k = static_cast<std::size_t>(slot[static_cast<std::size_t>(studies[s].disease)]);
          fp[k] += c.fp;
          n[k] += c.fp + c.tn;
        }
        RateTable rates;
        for (std::size_t k = 0; k < diseases.size(); ++k) {
          if (n[k] == 0) {
            throw Error(ErrorCode::ZeroDenominatorInReplicate,
                        "bootstrap iteration " + std::to_string(b) + ": resampled " +
                            std::string(to_string(diseases[k])) + " pool has no negatives");
          }
          rates.emplace(diseases[k], rate_from_counts(diseases[k], fp[k], n[k]));
          rate_reps[k][b] = rates.at(diseases[k]).rate;
        }
        for (std::size_t i = 0; i < profiles.size(); ++i) {
          const RiskEstimate est = estimate_resolved(profiles[i], resolved[i], rates);
          for (std::size_t j = 0; j < est.per_disease.size(); ++j) {
            pair_reps[i][j][b] = est.per_disease[j].risk;
          }
          total_reps[i][b] = est.total;
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (b < error_iteration) {
          error_iteration = b;
          error = std::current_exception();
        }
        return;
      }
    }
  };

  const unsigned workers = worker_count(config.threads, B);
  if (workers <= 1) {
    run_block(0, B);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(run_block, B * w / workers, B * (w + 1) / workers);
    }
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  BootstrapResult result;
  result.iterations = B;
  result.seed = config.seed;
  for (std::size_t k = 0; k < diseases.size(); ++k) {
    result.per_disease.emplace(diseases[k], summarize(rate_reps[k]));
  }
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    for (std::size_t j = 0; j < resolved[i].size(); ++j) {
      result.per_pair.emplace(std::pair{profiles[i], resolved[i][j].disease},
                              summarize(pair_reps[i][j]));
    }
    result.total.emplace(profiles[i], summarize(total_reps[i]));
    if (config.keep_replicates) result.total_replicates.emplace(profiles[i], std::move(total_reps[i]));
  }
  return result;
}

void attach_se(RateTable& rates, const BootstrapResult& result) {
  for (auto& [disease, rate] : rates) {
    if (auto it = result.per_disease.find(disease); it != result.per_disease.end()) {
      rate.se = it->second.se;
    }
  }
}

void attach_se(RiskEstimate& estimate, const BootstrapResult& result) {
  if (auto it = result.total.find(estimate.profile); it != result.total.end()) {
    estimate.total_se = it->second.se;
  }
  for (auto& r : estimate.per_disease) {
    if (auto it = result.per_pair.find({estimate.profile, r.disease}); it != result.per_pair.end()) {
      r.se = it->second.se;
    }
  }
}

}  // namespace fprisk
