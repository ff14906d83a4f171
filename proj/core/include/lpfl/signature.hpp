#pragma once

#include <set>
#include <string>
#include <vector>

namespace lpfl {

using SymbolName = std::string;

/// Relation symbols split into features and irreflexive precedence symbols.
/// The two sets are disjoint. Names starting with "fd$" are reserved for the
/// first-daughter expansion and cannot be declared.
class Signature {
 public:
  Signature() = default;

  /// Builds a signature from two name lists. Throws Error with code
  /// DuplicateName, SortClash or ReservedName on ill-formed input.
  static Signature declare(const std::vector<SymbolName>& features,
                           const std::vector<SymbolName>& precedences);

  bool is_feature(const SymbolName& name) const {
    return features_.contains(name);
  }
  bool is_precedence(const SymbolName& name) const {
    return precedences_.contains(name);
  }
  bool is_declared(const SymbolName& name) const {
    return is_feature(name) || is_precedence(name);
  }

  const std::set<SymbolName>& features() const { return features_; }
  const std::set<SymbolName>& precedences() const { return precedences_; }
  std::size_t symbol_count() const {
    return features_.size() + precedences_.size();
  }

  /// Registers a reserved "fd$..." feature symbol. Only the first-daughter
  /// expansion uses this; declare() rejects the prefix.
  void add_expansion_feature(const SymbolName& name);

  bool operator==(const Signature&) const = default;

 private:
  std::set<SymbolName> features_;
  std::set<SymbolName> precedences_;
};

bool is_identifier(const std::string& name);
bool has_reserved_prefix(const std::string& name);

}  // namespace lpfl
