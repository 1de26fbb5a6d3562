#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fprisk/estimator.hpp"

namespace fprisk {

struct ReportMetadata {
  std::string dataset_hash;
  std::string schedule_version;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> iterations;
};

struct OddsComparison {
  std::string first;
  std::string second;
  double odds_ratio = 0.0;
};

/// Disease-rate rows, one risk row per profile, and the per-disease
/// breakdown carried inside each RiskEstimate.
struct ReportDocument {
  ReportMetadata metadata;
  std::vector<DiseaseRate> disease_rates;
  std::vector<RiskEstimate> profile_risks;
  std::vector<OddsComparison> comparisons;
};

/// "fnv1a64:<16 hex digits>" over the raw bytes.
std::string dataset_hash(std::string_view bytes);

/// One decimal percentage point: 0.8553 -> "85.5%".
std::string format_percent(double probability);
/// Like format_percent, but SEs that round to zero print as "<0.1%".
std::string format_se(double se);

nlohmann::ordered_json to_json(const DiseaseRate& rate);
nlohmann::ordered_json to_json(const RiskEstimate& estimate);
nlohmann::ordered_json to_json(const ReportDocument& report);

/// Full-precision JSON, two-space indent, trailing newline.
std::string render_json(const ReportDocument& report);
/// Human-readable tables rounded to one decimal percentage point.
std::string render_table(const ReportDocument& report);

}  // namespace fprisk
