#include "ptmc/error.hpp"

namespace ptmc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSymbol: return "InvalidSymbol";
    case ErrorCode::Unbalanced: return "Unbalanced";
    case ErrorCode::NegativePrefix: return "NegativePrefix";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::InternalInvariantViolation: return "InternalInvariantViolation";
    case ErrorCode::UnbalancedParens: return "UnbalancedParens";
    case ErrorCode::EmptyTree: return "EmptyTree";
    case ErrorCode::UnknownParameterSet: return "UnknownParameterSet";
    case ErrorCode::ParamsFileInvalid: return "ParamsFileInvalid";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::BalanceViolation: return "BalanceViolation";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EmptyBlock: return "EmptyBlock";
    case ErrorCode::NotAPartition: return "NotAPartition";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      index_(index) {}

}  // namespace ptmc
