#pragma once

#include "lpfl/store.hpp"

namespace lpfl {

/// Caps on the finite-model search. max_universe 0 resolves to the store's
/// variable count (at least 1); universes beyond the variable count never
/// add models, so the search is also capped there. max_relation_bits caps
/// the relation state enumerated jointly: a group of symbols coupled by
/// shared constraints costs n*n bits per symbol at universe size n.
struct OracleBudget {
  int max_universe = 0;
  int max_relation_bits = 18;
};

/// True iff some universe within budget, some interpretation whose
/// precedence closures are irreflexive, and some assignment satisfy every
/// constraint and binding of the store. Assignments are enumerated before
/// relations and in a fixed order, so results are reproducible. Throws
/// Error(BudgetExceeded) when a universe size would exceed the budget
/// before any model was found.
bool brute_force_consistent(const ConstraintStore& store,
                            const OracleBudget& budget = {});

/// True iff both stores are equally satisfiable under the budget.
bool rule_soundness_check(const ConstraintStore& before,
                          const ConstraintStore& after,
                          const OracleBudget& budget = {});

}  // namespace lpfl
