#include "lpfl/errors.hpp"

namespace lpfl {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SortClash:
      return "SortClash";
    case ErrorCode::ReservedName:
      return "ReservedName";
    case ErrorCode::DuplicateName:
      return "DuplicateName";
    case ErrorCode::UndeclaredSymbol:
      return "UndeclaredSymbol";
    case ErrorCode::SortMismatch:
      return "SortMismatch";
    case ErrorCode::NotNormalForm:
      return "NotNormalForm";
    case ErrorCode::ClashPresent:
      return "ClashPresent";
    case ErrorCode::NotLinearizable:
      return "NotLinearizable";
    case ErrorCode::DuplicateVariable:
      return "DuplicateVariable";
    case ErrorCode::BudgetExceeded:
      return "BudgetExceeded";
  }
  return "Unknown";
}

void raise(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace lpfl
