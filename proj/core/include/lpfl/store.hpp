#pragma once

#include <map>
#include <string>
#include <vector>

#include "lpfl/constraint.hpp"
#include "lpfl/signature.hpp"

namespace lpfl {

/// A deduplicated set of constraints over canonical variable representatives,
/// plus the equivalence map produced by merges. Constraints are keyed by
/// their printed form, so iteration order is the lexicographic order the
/// rule schedule and the printer rely on.
///
/// Invariants kept by every mutator:
///  - constraints mention only representative variables,
///  - the binding map is idempotent (bindings always point at the
///    lexicographically smallest member of a class),
///  - tautologies (x = x, x = E p* : x) are never stored.
class ConstraintStore {
 public:
  ConstraintStore() = default;
  explicit ConstraintStore(Signature sig) : sig_(std::move(sig)) {}

  const Signature& signature() const { return sig_; }

  /// Validates symbols against the signature, rewrites the constraint
  /// through the binding map, then inserts it unless it is a tautology or
  /// already present. Throws Error(UndeclaredSymbol) or
  /// Error(SortMismatch).
  void add(const Constraint& c);

  /// Exact presence after canonicalization; does not rewrite through
  /// bindings.
  bool contains(const Constraint& c) const;

  void remove(const Constraint& c);

  Variable representative(const Variable& v) const;

  /// Merges the classes of a and b; the lexicographically smaller
  /// representative survives. Every stored constraint is rewritten.
  void merge(const Variable& a, const Variable& b);

  /// { y | x = E f : y or x = f : y in the store }, sorted.
  std::vector<Variable> succ_feature(const Variable& x,
                                     const SymbolName& f) const;

  /// Closure successors of x over p with composed edges removed: y is kept
  /// only if no z has closure edges x -> z -> y. Sorted.
  std::vector<Variable> succ_reduced(const Variable& x,
                                     const SymbolName& p) const;

  const std::map<std::string, Constraint>& constraints() const {
    return constraints_;
  }
  const std::map<Variable, Variable>& bindings() const { return bindings_; }

  /// All variables mentioned in constraints or bindings, sorted.
  std::vector<Variable> variables() const;

  std::size_t size() const { return constraints_.size(); }
  bool empty() const { return constraints_.empty(); }

  /// Lexicographically first clash witness x = E p+ : x, or nullptr.
  const Constraint* first_self_plus() const;

  /// Registers a reserved expansion feature on the embedded signature.
  void add_expansion_feature(const SymbolName& name) {
    sig_.add_expansion_feature(name);
  }

  bool operator==(const ConstraintStore& other) const {
    return sig_ == other.sig_ && constraints_ == other.constraints_ &&
           bindings_ == other.bindings_;
  }

 private:
  void validate(const Constraint& c) const;
  Constraint rewrite_through_bindings(const Constraint& c) const;
  void insert_canonical(const Constraint& c);

  Signature sig_;
  std::map<std::string, Constraint> constraints_;
  std::map<Variable, Variable> bindings_;
};

}  // namespace lpfl
