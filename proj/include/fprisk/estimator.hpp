#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fprisk/disease.hpp"
#include "fprisk/ingest.hpp"
#include "fprisk/profile.hpp"

namespace fprisk {

/// Pooled single-occasion false-positive rate for one disease.
struct DiseaseRate {
  Disease disease = Disease::BreastCancer;
  double rate = 0.0;
  std::int64_t pooled_fp = 0;
  std::int64_t pooled_n = 0;
  std::optional<double> se;
};

using RateTable = std::map<Disease, DiseaseRate>;

/// rate = fp / n. Throws ZeroDenominator when n == 0, DomainError when the
/// counts are negative or fp > n.
DiseaseRate rate_from_counts(Disease disease, std::int64_t pooled_fp, std::int64_t pooled_n);

/// Sum of false positives over sum of negatives (TN + FP) across studies of
/// a single disease.
DiseaseRate pool_rate(std::span<const StudyRecord> studies);

/// Groups studies by disease and pools each group.
RateTable pool_all(std::span<const StudyRecord> studies);

/// Lifetime occasion count for one schedule entry and profile. Age ranges
/// count both endpoints: floor((end - start) / interval) + 1.
std::int64_t resolve_schedule(const ScheduleEntry& entry, const SubpopulationProfile& profile);

/// 1 - (1 - rate)^occasions.
double lifetime_disease_risk(double rate, std::int64_t occasions);

struct RiskComponent {
  double rate = 0.0;
  std::int64_t occasions = 0;
};

/// 1 - prod(1 - P_d) over components; 0 for an empty collection.
double lifetime_total_risk(std::span<const RiskComponent> components);

struct ResolvedOccasions {
  Disease disease = Disease::BreastCancer;
  std::int64_t occasions = 0;
};

/// Diseases the profile screens for at least once, in canonical order.
/// Throws MissingSchedule if the profile's group is absent from the config.
std::vector<ResolvedOccasions> resolve_profile(const SubpopulationProfile& profile,
                                               const ScheduleConfig& schedule);

struct DiseaseRisk {
  Disease disease = Disease::BreastCancer;
  std::int64_t occasions = 0;
  double risk = 0.0;
  std::optional<double> se;
};

struct RiskEstimate {
  SubpopulationProfile profile;
  std::vector<DiseaseRisk> per_disease;  // exactly the resolved disease set
  double total = 0.0;
  std::optional<double> total_se;

  std::vector<Disease> disease_set() const;
};

/// Plug-in evaluation over an already resolved schedule.
RiskEstimate estimate_resolved(const SubpopulationProfile& profile,
                               std::span<const ResolvedOccasions> resolved,
                               const RateTable& rates);

/// Throws MissingRate when a screened disease has no pooled rate.
RiskEstimate estimate_profile(const SubpopulationProfile& profile, const RateTable& rates,
                              const ScheduleConfig& schedule);

/// (p1 / (1 - p1)) / (p2 / (1 - p2)). Both arguments must lie strictly
/// inside (0, 1); otherwise DegenerateOdds.
double odds_ratio(double p1, double p2);

}  // namespace fprisk
