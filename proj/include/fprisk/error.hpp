#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fprisk {

enum class ErrorCode {
  // ingest
  IoError,
  MalformedRow,
  MalformedConfig,
  UnknownDisease,
  UnknownSubpopulation,
  EmptyDataset,
  DuplicateStudyId,
  DuplicatePair,
  InvalidDerivation,
  // estimator
  ZeroDenominator,
  MixedDiseases,
  MissingRate,
  MissingSchedule,
  DomainError,
  DegenerateOdds,
  // bootstrap / oracle
  InvalidProbs,
  InsufficientReplicates,
  ZeroDenominatorInReplicate,
  // caller mistakes
  InvalidProfile,
  InvalidArgument,
};

/// Coarse grouping used to pick CLI exit codes and HTTP statuses.
enum class ErrorCategory { Parse, Estimation, Usage };

std::string_view to_string(ErrorCode code);
ErrorCategory category_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0,
        std::string key = {});

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }
  /// 1-based input line, 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }
  /// Offending key or field name, empty when not applicable.
  const std::string& key() const noexcept { return key_; }

 private:
  ErrorCode code_;
  std::size_t line_;
  std::string key_;
};

}  // namespace fprisk
