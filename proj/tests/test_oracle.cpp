#include <doctest.h>

#include <algorithm>
#include <random>

#include "lpfl/errors.hpp"
#include "lpfl/oracle.hpp"
#include "lpfl/rewrite.hpp"
#include "support/generators.hpp"
#include "support/naive_oracle.hpp"

using namespace lpfl;

namespace {

Signature fp_sig() { return Signature::declare({"f"}, {"p"}); }

ConstraintStore make_store(const std::vector<Constraint>& cs) {
  ConstraintStore store(fp_sig());
  for (const Constraint& c : cs) store.add(c);
  return store;
}

Constraint plus(const Variable& x, const Variable& y) {
  return Constraint::closure(x, "p", ClosureKind::Plus, y);
}

}  // namespace

TEST_SUITE_BEGIN("oracle");

TEST_CASE("a reflexive plus edge is unsatisfiable") {
  CHECK_FALSE(brute_force_consistent(make_store({plus("x", "x")})));
}

TEST_CASE("the empty store is satisfiable") {
  CHECK(brute_force_consistent(ConstraintStore(fp_sig())));
}

TEST_CASE("double feature values merge in some model") {
  CHECK(brute_force_consistent(make_store({
      Constraint::feature("x", "f", "y"),
      Constraint::feature("x", "f", "z"),
  })));
}

TEST_CASE("rule applications preserve satisfiability") {
  SUBCASE("Cycle") {
    ConstraintStore before = make_store({
        Constraint::closure("x", "p", ClosureKind::Star, "y"),
        Constraint::closure("y", "p", ClosureKind::Star, "x"),
    });
    NormalizeResult r = normalize(before);
    REQUIRE(!r.trace.empty());
    ConstraintStore after = replay_step(before, r.trace.front());
    CHECK(rule_soundness_check(before, after));
  }
  SUBCASE("TransClos") {
    ConstraintStore before = make_store({plus("x", "y"), plus("y", "z")});
    NormalizeResult r = normalize(before);
    REQUIRE(!r.trace.empty());
    ConstraintStore after = replay_step(before, r.trace.front());
    CHECK(rule_soundness_check(before, after));
  }
  SUBCASE("a deliberately wrong rewrite is caught") {
    ConstraintStore before = make_store({plus("x", "y")});
    ConstraintStore after = make_store({plus("x", "x")});
    CHECK_FALSE(rule_soundness_check(before, after));
  }
}

TEST_CASE("the oracle agrees with plain enumeration on tiny stores") {
  std::mt19937 rng(89);
  testing::GeneratorOptions opt;
  opt.var_count = 2;
  opt.max_constraints = 3;
  for (int round = 0; round < 250; ++round) {
    ConstraintStore store = testing::random_store(rng, opt);
    CHECK(brute_force_consistent(store) == testing::naive_consistent(store, 2));
  }
}

TEST_CASE("the oracle agrees with plain enumeration on single-symbol stores") {
  std::mt19937 rng(97);
  testing::GeneratorOptions opt;
  opt.var_count = 3;
  opt.max_constraints = 3;
  int compared = 0;
  for (int round = 0; round < 120 && compared < 40; ++round) {
    ConstraintStore store = testing::random_store(rng, opt);
    std::set<SymbolName> used;
    for (const auto& [key, c] : store.constraints()) {
      for (const SymbolName& s : {c.f, c.g, c.p}) {
        if (!s.empty()) used.insert(s);
      }
    }
    if (used.size() > 1) continue;
    ++compared;
    CHECK(brute_force_consistent(store) == testing::naive_consistent(store, 3));
  }
  CHECK(compared >= 40);
}

TEST_CASE("adding a constraint never makes an unsatisfiable store satisfiable") {
  std::mt19937 rng(101);
  testing::GeneratorOptions opt;
  opt.var_count = 3;
  opt.max_constraints = 4;
  for (int round = 0; round < 200; ++round) {
    ConstraintStore store = testing::random_store(rng, opt);
    bool before = brute_force_consistent(store);
    store.add(testing::random_constraint(rng, opt, store.signature(),
                                         testing::variable_pool(3)));
    bool after = brute_force_consistent(store);
    if (!before) CHECK_FALSE(after);
  }
}

TEST_CASE("the first-daughter translation is equisatisfiable") {
  std::mt19937 rng(103);
  testing::GeneratorOptions opt;
  opt.var_count = 2;
  opt.max_constraints = 2;
  opt.allow_first_daughter = false;
  OracleBudget wide;
  wide.max_relation_bits = 27;
  for (int round = 0; round < 120; ++round) {
    ConstraintStore store = testing::random_store(rng, opt);
    store.add(Constraint::first_daughter("a", "f", "p", "b"));
    bool direct = brute_force_consistent(store, wide);
    bool translated =
        brute_force_consistent(expand_first_daughter(store), wide);
    CHECK(direct == translated);
  }
}

TEST_CASE("functional precedence against membership is caught as unsatisfiable") {
  // The solver merges these through the functional rule; the oracle must
  // agree that no model exists.
  ConstraintStore store = make_store({
      Constraint::imm_prec("x", "p", "y"),
      Constraint::member("x", "p", "z"),
      plus("y", "z"),
  });
  CHECK_FALSE(brute_force_consistent(store));
  NormalizeResult r = normalize(store);
  CHECK_FALSE(r.verdict.is_consistent());
}

TEST_CASE("deterministic rewriting stops short of star case analysis") {
  // z = E p* : x leaves two readings. If z and x are equal, the domain
  // precedence pairs an element with itself; if z strictly precedes x,
  // the functional successor funnels a path that closes a cycle. Each
  // reading fails for a different reason, so no single guarded addition
  // covers both, and the solver keeps the store: deciding it would need
  // entailment-triggered case analysis, which the engine does not do.
  // The oracle sees through it; exhaustively, such stores need three
  // variables and five constraints, one past the sweep bound the solver
  // is verified complete for.
  ConstraintStore store = make_store({
      Constraint::dom_prec("f", "z", "p", ClosureKind::Plus, "f", "x"),
      Constraint::closure("x", "p", ClosureKind::Plus, "y"),
      Constraint::member("z", "f", "x"),
      Constraint::closure("z", "p", ClosureKind::Star, "x"),
      Constraint::imm_prec("z", "p", "y"),
  });
  CHECK(normalize(store).verdict.is_consistent());
  CHECK_FALSE(brute_force_consistent(store));
}

TEST_CASE("the budget guards the enumeration") {
  ConstraintStore chain = make_store({
      plus("a", "b"),
      plus("b", "c"),
      plus("c", "d"),
      plus("d", "e"),
  });
  CHECK_THROWS_AS((void)brute_force_consistent(chain), Error);
  OracleBudget wide;
  wide.max_relation_bits = 25;
  CHECK(brute_force_consistent(chain, wide));
}

TEST_CASE("precedence skeleton accepts exactly the attested middle fields") {
  // er, mann and strasse must precede laufen, laufen must precede sah.
  auto skeleton = [] {
    return make_store({
        plus("er", "laufen"),
        plus("mann", "laufen"),
        plus("strasse", "laufen"),
        plus("laufen", "sah"),
    });
  };
  OracleBudget budget;
  budget.max_universe = 5;
  budget.max_relation_bits = 25;

  const std::vector<std::vector<Variable>> accepted = {
      {"er", "mann", "strasse", "laufen", "sah"},
      {"mann", "er", "strasse", "laufen", "sah"},
      {"strasse", "er", "mann", "laufen", "sah"},
  };
  const std::vector<std::vector<Variable>> rejected = {
      {"laufen", "er", "mann", "strasse", "sah"},
      {"er", "mann", "sah", "strasse", "laufen"},
      {"sah", "laufen", "er", "mann", "strasse"},
  };
  for (const auto& order : accepted) {
    ConstraintStore store = skeleton();
    for (const Constraint& c :
         order_to_constraints(order, "p", store.signature())) {
      store.add(c);
    }
    CHECK(brute_force_consistent(store, budget));
  }
  for (const auto& order : rejected) {
    ConstraintStore store = skeleton();
    for (const Constraint& c :
         order_to_constraints(order, "p", store.signature())) {
      store.add(c);
    }
    CHECK_FALSE(brute_force_consistent(store, budget));
  }
}

TEST_SUITE_END();
