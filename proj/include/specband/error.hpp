#pragma once

#include <stdexcept>
#include <string>

namespace specband {

enum class ErrorCode {
  NonSquare,
  HorizonExceeded,
  InsufficientTruncation,
  NonPositiveParameter,
  MismatchedFactorization,
  SizeTooLarge,
  ZeroExtremeDiagonal,
  InsufficientLength,
  CoincidentPoints,
  InterlacingViolated,
  NotBracketed,
  DegenerateEigenvalue,
  ShapeViolation,
  ZeroVector,
  IndexOutOfRange,
  EvaluationOnSpectrum,
  AssumptionViolated,
  NonPositiveWeight,
  SingularLeadingMinor,
  WindowTooSmall,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::InsufficientTruncation: return "InsufficientTruncation";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::MismatchedFactorization: return "MismatchedFactorization";
    case ErrorCode::SizeTooLarge: return "SizeTooLarge";
    case ErrorCode::ZeroExtremeDiagonal: return "ZeroExtremeDiagonal";
    case ErrorCode::InsufficientLength: return "InsufficientLength";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::InterlacingViolated: return "InterlacingViolated";
    case ErrorCode::NotBracketed: return "NotBracketed";
    case ErrorCode::DegenerateEigenvalue: return "DegenerateEigenvalue";
    case ErrorCode::ShapeViolation: return "ShapeViolation";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EvaluationOnSpectrum: return "EvaluationOnSpectrum";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::SingularLeadingMinor: return "SingularLeadingMinor";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace specband
