#include "fprisk/estimator.hpp"

#include <cmath>
#include <string>

#include "fprisk/error.hpp"

namespace fprisk {

namespace {

// Exponentiation by squaring.
double power(double base, std::int64_t exponent) {
  double result = 1.0;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

void check_rate(double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::DomainError, "rate must lie in [0, 1], got " + std::to_string(rate));
  }
}

void check_occasions(std::int64_t occasions) {
  if (occasions < 0) {
    throw Error(ErrorCode::DomainError,
                "occasions must be non-negative, got " + std::to_string(occasions));
  }
}

}  // namespace

DiseaseRate rate_from_counts(Disease disease, std::int64_t pooled_fp, std::int64_t pooled_n) {
  if (pooled_n == 0) {
    throw Error(ErrorCode::ZeroDenominator,
                std::string(to_string(disease)) + ": pooled TN + FP is zero");
  }
  if (pooled_fp < 0 || pooled_n < 0 || pooled_fp > pooled_n) {
    throw Error(ErrorCode::DomainError,
                std::string(to_string(disease)) + ": inconsistent pooled counts");
  }
  return DiseaseRate{disease, static_cast<double>(pooled_fp) / static_cast<double>(pooled_n),
                     pooled_fp, pooled_n, std::nullopt};
}

DiseaseRate pool_rate(std::span<const StudyRecord> studies) {
  if (studies.empty()) {
    throw Error(ErrorCode::ZeroDenominator, "no studies to pool");
  }
  const Disease disease = studies.front().disease;
  std::int64_t fp = 0;
  std::int64_t n = 0;
  for (const auto& s : studies) {
    if (s.disease != disease) {
      throw Error(ErrorCode::MixedDiseases, "study '" + s.study_id + "' is for " +
                                                std::string(to_string(s.disease)) + ", not " +
                                                std::string(to_string(disease)));
    }
    fp += s.fp;
    n += s.negatives();
  }
  return rate_from_counts(disease, fp, n);
}

RateTable pool_all(std::span<const StudyRecord> studies) {
  std::map<Disease, std::vector<StudyRecord>> groups;
  for (const auto& s : studies) groups[s.disease].push_back(s);
  RateTable rates;
  for (const auto& [disease, group] : groups) rates.emplace(disease, pool_rate(group));
  return rates;
}

std::int64_t resolve_schedule(const ScheduleEntry& entry, const SubpopulationProfile& profile) {
  std::int64_t base = 0;
  if (const auto* direct = std::get_if<DirectCount>(&entry.occasions)) {
    base = direct->occasions;
  } else {
    const auto& range = std::get<AgeRange>(entry.occasions);
    base = static_cast<std::int64_t>(
               std::floor((range.end_age - range.start_age) / range.interval_years)) +
           1;
  }
  return base + entry.per_pregnancy_occasions * profile.pregnancies;
}

double lifetime_disease_risk(double rate, std::int64_t occasions) {
  check_rate(rate);
  check_occasions(occasions);
  return 1.0 - power(1.0 - rate, occasions);
}

double lifetime_total_risk(std::span<const RiskComponent> components) {
  double survival = 1.0;
  for (const auto& c : components) survival *= 1.0 - lifetime_disease_risk(c.rate, c.occasions);
  return 1.0 - survival;
}

std::vector<ResolvedOccasions> resolve_profile(const SubpopulationProfile& profile,
                                               const ScheduleConfig& schedule) {
  validate(profile);
  const std::string group = schedule_group(profile);
  if (!schedule.has_subpopulation(group)) {
    throw Error(ErrorCode::MissingSchedule,
                "schedule '" + schedule.version_label + "' has no subpopulation '" + group + "'");
  }
  std::vector<ResolvedOccasions> out;
  for (Disease d : kAllDiseases) {
    const ScheduleEntry* entry = schedule.find(group, d);
    if (entry == nullptr) continue;
    const std::int64_t t = resolve_schedule(*entry, profile);
    if (t >= 1) out.push_back({d, t});
  }
  return out;
}

std::vector<Disease> RiskEstimate::disease_set() const {
  std::vector<Disease> out;
  out.reserve(per_disease.size());
  for (const auto& r : per_disease) out.push_back(r.disease);
  return out;
}

RiskEstimate estimate_resolved(const SubpopulationProfile& profile,
                               std::span<const ResolvedOccasions> resolved,
                               const RateTable& rates) {
  RiskEstimate est;
  est.profile = profile;
  est.per_disease.reserve(resolved.size());
  double survival = 1.0;
  for (const auto& r : resolved) {
    auto it = rates.find(r.disease);
    if (it == rates.end()) {
      throw Error(ErrorCode::MissingRate,
                  std::string(to_string(r.disease)) + " is screened but has no pooled rate");
    }
    const double risk = lifetime_disease_risk(it->second.rate, r.occasions);
    est.per_disease.push_back({r.disease, r.occasions, risk, std::nullopt});
    survival *= 1.0 - risk;
  }
  est.total = 1.0 - survival;
  return est;
}

RiskEstimate estimate_profile(const SubpopulationProfile& profile, const RateTable& rates,
                              const ScheduleConfig& schedule) {
  const auto resolved = resolve_profile(profile, schedule);
  return estimate_resolved(profile, resolved, rates);
}

double odds_ratio(double p1, double p2) {
  auto interior = [](double p) { return p > 0.0 && p < 1.0; };
  if (!interior(p1) || !interior(p2)) {
    throw Error(ErrorCode::DegenerateOdds, "odds ratio needs probabilities strictly in (0, 1)");
  }
  return (p1 / (1.0 - p1)) / (p2 / (1.0 - p2));
}

}  // namespace fprisk
