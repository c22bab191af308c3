#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace annuluslab {

enum class ErrorCode {
  DuplicateX,
  NonIncreasingY,
  PeriodViolation,
  XOutOfRange,
  EmptyLift,
  ResourceLimit,
  InternalInvariant,
  IdentityTarget,
  UnsupportedRegularity,
  TypeMismatch,
  InfeasibleConfig,
  InvalidArgument,
  SyntaxError,
  InvariantViolation,
  UnknownCommand,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateX: return "DuplicateX";
    case ErrorCode::NonIncreasingY: return "NonIncreasingY";
    case ErrorCode::PeriodViolation: return "PeriodViolation";
    case ErrorCode::XOutOfRange: return "XOutOfRange";
    case ErrorCode::EmptyLift: return "EmptyLift";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::InternalInvariant: return "InternalInvariant";
    case ErrorCode::IdentityTarget: return "IdentityTarget";
    case ErrorCode::UnsupportedRegularity: return "UnsupportedRegularity";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code contract) can dispatch without string
/// matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), cause_(code), message_(what) {}

  /// A wrapping error, e.g. InvariantViolation caused by DuplicateX.
  Error(ErrorCode code, ErrorCode cause, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + std::string(to_string(cause)) + ": " + what),
        code_(code),
        cause_(cause),
        message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCode cause() const noexcept { return cause_; }
  /// The text without the code prefixes.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  ErrorCode cause_;
  std::string message_;
};

}  // namespace annuluslab
