#pragma once

#include <cassert>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lpfl/store.hpp"

namespace lpfl {

/// The constraint-solving rules. IPExists is the membership introduction
/// for functional precedence (x = p : y adds x = E p : y). ImmTrans and
/// InvTrans funnel closure paths through a unique immediate successor or
/// predecessor: with x = p : z, any path x = E p+ : y must leave through
/// z, so z = E p* : y; with x = p^-1 : y, any path w = E p+ : x must
/// arrive through y, so w = E p* : y. Without them, stores whose only
/// contradiction threads through the functional edge normalize clash-free
/// while having no model.
enum class RuleId {
  Equals,
  Feat,
  FeatExists,
  Subset,
  TransConj,
  TransClos,
  Cycle,
  DomPrec,
  IPExists,
  ExistsTrans,
  InvIntro,
  InvExists,
  ImmTrans,
  InvTrans,
};

const char* to_string(RuleId id);

/// A matched rule instance: the premises in rule order. Instances of the
/// same rule are ordered lexicographically by the printed forms of their
/// premises; that order plus the fixed rule priority makes solving
/// deterministic.
struct RuleInstance {
  RuleId rule;
  std::vector<Constraint> premises;
};

/// One firing. `consumed` are the matched premises; `removed`, `added`
/// and `merges` describe the effect exactly, so a trace can be replayed
/// with replay_step. merges hold (absorbed, representative) pairs.
struct TraceStep {
  RuleId rule;
  std::vector<Constraint> consumed;
  std::vector<Constraint> removed;
  std::vector<Constraint> added;
  std::vector<std::pair<Variable, Variable>> merges;
};

class Verdict {
 public:
  static Verdict consistent(ConstraintStore normal_form) {
    Verdict v;
    v.consistent_ = true;
    v.store_ = std::move(normal_form);
    return v;
  }
  static Verdict clash(Constraint witness) {
    assert(witness.is_self_plus());
    Verdict v;
    v.consistent_ = false;
    v.witness_ = std::move(witness);
    return v;
  }

  bool is_consistent() const { return consistent_; }
  const ConstraintStore& store() const { return store_; }
  const Constraint& witness() const { return witness_; }

 private:
  Verdict() = default;
  bool consistent_ = false;
  ConstraintStore store_;
  Constraint witness_;
};

struct NormalizeResult {
  Verdict verdict;
  std::vector<TraceStep> trace;
};

/// Star composed with Star stays Star; anything else is Plus.
ClosureKind compose_closure(ClosureKind k1, ClosureKind k2);

/// Replaces every x = [f p 1] y with its definition: a fresh reserved
/// feature fd$f$p valued y, membership of y in f, and the domain-precedence
/// constraint placing the fd$f$p value at or before every f value.
/// Idempotent.
ConstraintStore expand_first_daughter(ConstraintStore store);

/// The instance the deterministic schedule fires next, or nothing when the
/// store is in normal form. First-daughter constraints are handled by
/// expansion, not by a rule, and are ignored here.
std::optional<RuleInstance> applicable_rule(const ConstraintStore& store);

bool is_normal(const ConstraintStore& store);

/// Expands first-daughter constraints, then applies rules to fixpoint
/// under the deterministic schedule. Stops early when the clash form
/// x = E p+ : x appears; the verdict is the same either way.
NormalizeResult normalize(const ConstraintStore& store);

/// Applies one recorded step. Replaying a whole trace onto
/// expand_first_daughter(input) reproduces normalize's output store.
ConstraintStore replay_step(ConstraintStore store, const TraceStep& step);

/// Empirical bound asserted by the termination suite: ten constraint
/// forms times variable pairs times symbols.
std::size_t firing_ceiling(std::size_t variable_count,
                           std::size_t symbol_count);

namespace detail {

/// The two normalize engines behind the dispatching normalize(): a full
/// rescan per firing, and an incremental candidate index. They follow the
/// same schedule and produce identical results; the equivalence is pinned
/// by tests. Both expect first daughters to be expanded already.
NormalizeResult normalize_scan(ConstraintStore expanded);
NormalizeResult normalize_indexed(ConstraintStore expanded);

}  // namespace detail

}  // namespace lpfl
