#include "fprisk/error.hpp"

namespace fprisk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::MalformedConfig: return "MalformedConfig";
    case ErrorCode::UnknownDisease: return "UnknownDisease";
    case ErrorCode::UnknownSubpopulation: return "UnknownSubpopulation";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DuplicateStudyId: return "DuplicateStudyId";
    case ErrorCode::DuplicatePair: return "DuplicatePair";
    case ErrorCode::InvalidDerivation: return "InvalidDerivation";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::MixedDiseases: return "MixedDiseases";
    case ErrorCode::MissingRate: return "MissingRate";
    case ErrorCode::MissingSchedule: return "MissingSchedule";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateOdds: return "DegenerateOdds";
    case ErrorCode::InvalidProbs: return "InvalidProbs";
    case ErrorCode::InsufficientReplicates: return "InsufficientReplicates";
    case ErrorCode::ZeroDenominatorInReplicate: return "ZeroDenominatorInReplicate";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::MalformedRow:
    case ErrorCode::MalformedConfig:
    case ErrorCode::UnknownDisease:
    case ErrorCode::UnknownSubpopulation:
    case ErrorCode::EmptyDataset:
    case ErrorCode::DuplicateStudyId:
    case ErrorCode::DuplicatePair:
    case ErrorCode::InvalidDerivation:
      return ErrorCategory::Parse;
    case ErrorCode::InvalidProfile:
    case ErrorCode::InvalidArgument:
      return ErrorCategory::Usage;
    default:
      return ErrorCategory::Estimation;
  }
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line,
             std::string key)
    : std::runtime_error(line == 0 ? message
                                   : "line " + std::to_string(line) + ": " + message),
      code_(code),
      line_(line),
      key_(std::move(key)) {}

}  // namespace fprisk
