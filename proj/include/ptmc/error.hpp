#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ptmc {

enum class ErrorCode {
  InvalidSymbol,
  Unbalanced,
  NegativePrefix,
  CapExceeded,
  InternalInvariantViolation,
  UnbalancedParens,
  EmptyTree,
  UnknownParameterSet,
  ParamsFileInvalid,
  LengthMismatch,
  ConfigInvalid,
  BalanceViolation,
  NoConvergence,
  EmptyBlock,
  NotAPartition,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. Carries a machine-readable code and, for
/// errors tied to a position in an input word, the first offending index.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace ptmc
