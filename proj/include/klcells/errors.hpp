#pragma once

#include <stdexcept>
#include <string>

namespace klcells {

// Failure taxonomy shared by all modules. Every throwing operation uses one
// of these codes so the CLI can map failures to machine-readable records.
enum class ErrorCode {
  NonSymmetricMatrix,
  WeightConjugacyViolation,
  UnsupportedBondOrder,
  InvalidWeight,
  ElementCapExceeded,
  ParabolicNotClosedInBall,
  SupportEscapesBall,
  PreconditionViolated,
  HypothesisFailed,
  WeightHypothesisViolated,
  NotDownwardClosed,
  WeightTooSmall,
  UnclassifiedAlcove,
  UnsupportedRank,
  CoefficientOverflow,
  ConfigError,
  AuditFailed,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonSymmetricMatrix: return "NonSymmetricMatrix";
    case ErrorCode::WeightConjugacyViolation: return "WeightConjugacyViolation";
    case ErrorCode::UnsupportedBondOrder: return "UnsupportedBondOrder";
    case ErrorCode::InvalidWeight: return "InvalidWeight";
    case ErrorCode::ElementCapExceeded: return "ElementCapExceeded";
    case ErrorCode::ParabolicNotClosedInBall: return "ParabolicNotClosedInBall";
    case ErrorCode::SupportEscapesBall: return "SupportEscapesBall";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::WeightHypothesisViolated: return "WeightHypothesisViolated";
    case ErrorCode::NotDownwardClosed: return "NotDownwardClosed";
    case ErrorCode::WeightTooSmall: return "WeightTooSmall";
    case ErrorCode::UnclassifiedAlcove: return "UnclassifiedAlcove";
    case ErrorCode::UnsupportedRank: return "UnsupportedRank";
    case ErrorCode::CoefficientOverflow: return "CoefficientOverflow";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::AuditFailed: return "AuditFailed";
  }
  return "UnknownError";
}

class KlError : public std::runtime_error {
 public:
  KlError(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace klcells
