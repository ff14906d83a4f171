#pragma once

#include <stdexcept>
#include <string>

namespace lpfl {

enum class ErrorCode {
  SortClash,
  ReservedName,
  DuplicateName,
  UndeclaredSymbol,
  SortMismatch,
  NotNormalForm,
  ClashPresent,
  NotLinearizable,
  DuplicateVariable,
  BudgetExceeded,
};

const char* to_string(ErrorCode code);

/// Thrown on contract violations. The code tells callers which contract
/// failed; the message carries the offending names.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace lpfl
