#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lpfl/store.hpp"

namespace lpfl {

/// A finite interpretation: named universe elements and one binary
/// relation per symbol. precedence_symbols records which relations must
/// have an irreflexive transitive closure.
struct Interpretation {
  std::vector<std::string> elements;
  std::set<SymbolName> precedence_symbols;
  std::map<SymbolName, std::set<std::pair<int, int>>> relations;

  int size() const { return static_cast<int>(elements.size()); }
};

struct Assignment {
  std::map<Variable, int> at;
};

/// True iff every precedence relation's transitive closure is irreflexive.
bool valid_interpretation(const Interpretation& interp);

/// The satisfaction relation, one clause per constraint form. Equality
/// holds when both variables map to the same element; a feature constraint
/// when y's element is the only f-successor of x's element; closures go
/// through the transitive (or reflexive-transitive) closure of p; the
/// first-daughter clause is evaluated directly, not via its translation.
bool evaluate(const Interpretation& interp, const Assignment& assign,
              const Constraint& c);

/// Conjunction over all constraints and bindings of the store.
bool satisfies_all(const Interpretation& interp, const Assignment& assign,
                   const ConstraintStore& store);

struct CanonicalModel {
  Interpretation interpretation;
  Assignment assignment;
};

/// The model built from a clash-free normal form: the universe is the set
/// of representatives the store mentions, features get their succ sets,
/// precedences their transitively reduced closure edges. Throws
/// Error(NotNormalForm) or Error(ClashPresent).
CanonicalModel canonical_model(const ConstraintStore& normal_form);

/// Extends the precedence DAG of a clash-free normal form to a total order
/// over the variables that occur in p-closure constraints. Candidates with
/// no unplaced predecessor are taken lexicographically. Immediate
/// precedence pairs must come out adjacent; when that cannot be arranged
/// the function throws Error(NotLinearizable).
std::vector<Variable> linearize(const ConstraintStore& normal_form,
                                const SymbolName& p);

/// Closure-Plus constraints for each consecutive pair of the order.
/// Throws Error(DuplicateVariable) or Error(SortMismatch) /
/// Error(UndeclaredSymbol).
std::vector<Constraint> order_to_constraints(const std::vector<Variable>& order,
                                             const SymbolName& p,
                                             const Signature& sig);

/// Model text: "REL r : x -> y" lines sorted lexicographically, then
/// "BIND x := rep" lines.
std::string print_model(const CanonicalModel& model,
                        const ConstraintStore& normal_form);

}  // namespace lpfl
