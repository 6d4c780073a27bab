#pragma once

#include <stdexcept>
#include <string>

namespace busyq {

enum class ErrorKind {
  NonPositiveParameter,
  NotStrictlyDecreasing,
  LastRateNonzero,
  PhaseOutOfRange,
  OrderMismatch,
  NotFeasible,
  DegenerateRates,
  RequiresProportionalMode,
  SingularMatrix,
  IndexOutOfRange,
  CapExceeded,
  PoleAtArgument,
  EmptyAllocation,
  ParseError,
  BadConfig,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorKind::NotStrictlyDecreasing: return "NotStrictlyDecreasing";
    case ErrorKind::LastRateNonzero: return "LastRateNonzero";
    case ErrorKind::PhaseOutOfRange: return "PhaseOutOfRange";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::NotFeasible: return "NotFeasible";
    case ErrorKind::DegenerateRates: return "DegenerateRates";
    case ErrorKind::RequiresProportionalMode: return "RequiresProportionalMode";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::PoleAtArgument: return "PoleAtArgument";
    case ErrorKind::EmptyAllocation: return "EmptyAllocation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace busyq
