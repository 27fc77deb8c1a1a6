#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kontsevich {

enum class ErrorCode {
  // exact arithmetic
  NonTerminating,
  PoleInC,
  // propagator geometry
  CoincidentPoints,
  EqualRealParts,
  // numerics
  DegenerateSample,
  DimensionOverflow,
  // series engine
  CapExceeded,
  SingularLeadingTerm,
  FilterViolation,
  NonDarbouxBivector,
  InvalidJet,
  DimensionMismatch,
  // input handling
  ParseError,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonTerminating: return "NonTerminating";
    case ErrorCode::PoleInC: return "PoleInC";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::EqualRealParts: return "EqualRealParts";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::SingularLeadingTerm: return "SingularLeadingTerm";
    case ErrorCode::FilterViolation: return "FilterViolation";
    case ErrorCode::NonDarbouxBivector: return "NonDarbouxBivector";
    case ErrorCode::InvalidJet: return "InvalidJet";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Single exception type for every recoverable failure in the library; the
/// code identifies the violated precondition.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kontsevich
