#include "lpfl/signature.hpp"

#include <cctype>

#include "lpfl/errors.hpp"

namespace lpfl {

bool is_identifier(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_')
    return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

bool has_reserved_prefix(const std::string& name) {
  return name.rfind("fd$", 0) == 0;
}

namespace {

void check_name(const SymbolName& name) {
  if (has_reserved_prefix(name))
    raise(ErrorCode::ReservedName,
          "symbol '" + name + "' uses the reserved prefix fd$");
  if (!is_identifier(name))
    throw std::invalid_argument("symbol '" + name + "' is not an identifier");
}

}  // namespace

Signature Signature::declare(const std::vector<SymbolName>& features,
                             const std::vector<SymbolName>& precedences) {
  Signature sig;
  for (const auto& name : features) {
    check_name(name);
    if (!sig.features_.insert(name).second)
      raise(ErrorCode::DuplicateName, "feature '" + name + "' declared twice");
  }
  for (const auto& name : precedences) {
    check_name(name);
    if (sig.features_.contains(name))
      raise(ErrorCode::SortClash,
            "'" + name + "' declared both as feature and precedence");
    if (!sig.precedences_.insert(name).second)
      raise(ErrorCode::DuplicateName, "prec '" + name + "' declared twice");
  }
  return sig;
}

void Signature::add_expansion_feature(const SymbolName& name) {
  if (precedences_.contains(name))
    raise(ErrorCode::SortClash, "'" + name + "' is a precedence symbol");
  features_.insert(name);
}

}  // namespace lpfl
