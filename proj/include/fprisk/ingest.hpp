#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fprisk/disease.hpp"

namespace fprisk {

/// Confusion-matrix counts reported by one study of one disease's primary
/// screening procedure.
struct StudyRecord {
  std::string study_id;
  Disease disease = Disease::BreastCancer;
  std::int64_t tp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::string source;

  /// N_s: every subject in the study.
  std::int64_t total() const { return tp + fn + tn + fp; }
  /// n_s: subjects without the disease (TN + FP).
  std::int64_t negatives() const { return tn + fp; }
  /// Combined true-positive / false-negative cell.
  std::int64_t positives() const { return tp + fn; }

  bool operator==(const StudyRecord&) const = default;
};

inline constexpr std::string_view kStudyCsvHeader = "study_id,disease_id,tp,fn,tn,fp,source";

/// Parses the study CSV. Rows keep file order. Throws Error with the 1-based
/// line of the first offending row; nothing is returned on failure.
std::vector<StudyRecord> parse_study_csv(std::string_view bytes);

/// Inverse of parse_study_csv. Fields are quoted only when needed.
std::string write_study_csv(std::span<const StudyRecord> records);

struct DirectCount {
  std::int64_t occasions = 0;
  bool operator==(const DirectCount&) const = default;
};

/// Inclusive age range screened every `interval_years`.
struct AgeRange {
  double start_age = 0;
  double end_age = 0;
  double interval_years = 1;
  bool operator==(const AgeRange&) const = default;
};

struct ScheduleEntry {
  std::string subpopulation;
  Disease disease = Disease::BreastCancer;
  std::variant<DirectCount, AgeRange> occasions;
  /// Extra occasions added for each expected pregnancy.
  std::int64_t per_pregnancy_occasions = 0;

  bool operator==(const ScheduleEntry&) const = default;
};

struct ScheduleConfig {
  std::string version_label;
  std::vector<std::string> subpopulations;
  std::vector<Disease> diseases;
  std::vector<ScheduleEntry> entries;

  bool has_subpopulation(std::string_view id) const;
  /// nullptr when the pair is absent (not screened).
  const ScheduleEntry* find(std::string_view subpopulation, Disease disease) const;
};

/// Parses the JSON schedule document:
///   {"version": "...", "subpopulations": [...], "diseases": [...],
///    "entries": [{"subpopulation", "disease", "occasions" |
///                 "start_age"/"end_age"/"interval_years",
///                 "per_pregnancy_occasions"?}]}
/// Errors carry the offending key path, e.g. "entries[3].interval_years".
ScheduleConfig parse_schedule_config(std::string_view bytes);

/// Reads a whole file; throws Error(IoError) if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

std::vector<StudyRecord> load_study_csv(const std::filesystem::path& path);
ScheduleConfig load_schedule_config(const std::filesystem::path& path);

}  // namespace fprisk
