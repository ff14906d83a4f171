#include <doctest.h>

#include <random>

#include "lpfl/errors.hpp"
#include "lpfl/rewrite.hpp"
#include "lpfl/semantics.hpp"
#include "support/generators.hpp"

using namespace lpfl;

namespace {

Signature fgp_sig() { return Signature::declare({"f", "g"}, {"p"}); }

ConstraintStore make_store(const std::vector<Constraint>& cs) {
  ConstraintStore store(fgp_sig());
  for (const Constraint& c : cs) store.add(c);
  return store;
}

Interpretation three_elements() {
  Interpretation interp;
  interp.elements = {"a", "b", "c"};
  interp.precedence_symbols = {"p"};
  return interp;
}

int idx(const Interpretation& interp, const std::string& name) {
  for (int i = 0; i < interp.size(); ++i) {
    if (interp.elements[i] == name) return i;
  }
  REQUIRE(false);
  return -1;
}

}  // namespace

TEST_SUITE_BEGIN("semantics");

TEST_CASE("interpretation validity is irreflexivity of the closure") {
  Interpretation interp = three_elements();
  SUBCASE("acyclic chain is valid") {
    interp.relations["p"] = {{0, 1}, {1, 2}};
    CHECK(valid_interpretation(interp));
  }
  SUBCASE("a reflexive pair is invalid") {
    interp.relations["p"] = {{0, 0}};
    CHECK_FALSE(valid_interpretation(interp));
  }
  SUBCASE("a two-cycle is invalid") {
    interp.relations["p"] = {{0, 1}, {1, 0}};
    CHECK_FALSE(valid_interpretation(interp));
  }
  SUBCASE("feature relations are unrestricted") {
    interp.relations["f"] = {{0, 0}, {1, 0}, {1, 2}};
    CHECK(valid_interpretation(interp));
  }
}

TEST_CASE("the feature clause demands a unique value") {
  Interpretation interp = three_elements();
  Assignment assign;
  assign.at = {{"x", 0}, {"y", 1}};
  SUBCASE("single value satisfies") {
    interp.relations["f"] = {{0, 1}};
    CHECK(evaluate(interp, assign, Constraint::feature("x", "f", "y")));
  }
  SUBCASE("two values falsify") {
    interp.relations["f"] = {{0, 1}, {0, 2}};
    CHECK_FALSE(evaluate(interp, assign, Constraint::feature("x", "f", "y")));
    CHECK(evaluate(interp, assign, Constraint::member("x", "f", "y")));
  }
}

TEST_CASE("reflexive closure accepts equal endpoints") {
  Interpretation interp = three_elements();
  Assignment assign;
  assign.at = {{"x", 0}, {"y", 0}};
  CHECK(evaluate(interp, assign,
                 Constraint::closure("x", "p", ClosureKind::Star, "y")));
  CHECK_FALSE(evaluate(interp, assign,
                       Constraint::closure("x", "p", ClosureKind::Plus, "y")));
}

TEST_CASE("star closure equals plus closure or equality") {
  std::mt19937 rng(73);
  for (int round = 0; round < 300; ++round) {
    Interpretation interp = three_elements();
    std::set<std::pair<int, int>> rel;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0)
          rel.insert({a, b});
      }
    }
    interp.relations["p"] = rel;
    if (!valid_interpretation(interp)) continue;
    Assignment assign;
    assign.at = {{"x", std::uniform_int_distribution<int>(0, 2)(rng)},
                 {"y", std::uniform_int_distribution<int>(0, 2)(rng)}};
    bool star = evaluate(interp, assign,
                         Constraint::closure("x", "p", ClosureKind::Star, "y"));
    bool plus = evaluate(interp, assign,
                         Constraint::closure("x", "p", ClosureKind::Plus, "y"));
    CHECK(star == (plus || assign.at["x"] == assign.at["y"]));
  }
}

TEST_CASE("immediate precedence clauses are functional both ways") {
  Interpretation interp = three_elements();
  interp.relations["p"] = {{0, 1}, {1, 2}};
  Assignment assign;
  assign.at = {{"x", 0}, {"y", 1}, {"z", 2}};
  CHECK(evaluate(interp, assign, Constraint::imm_prec("x", "p", "y")));
  CHECK(evaluate(interp, assign, Constraint::inv_imm_prec("y", "p", "x")));
  CHECK_FALSE(evaluate(interp, assign, Constraint::imm_prec("x", "p", "z")));
  interp.relations["p"] = {{0, 1}, {0, 2}};
  CHECK_FALSE(evaluate(interp, assign, Constraint::imm_prec("x", "p", "y")));
}

TEST_CASE("satisfies_all is the finite conjunction") {
  ConstraintStore empty(fgp_sig());
  Interpretation interp = three_elements();
  Assignment assign;
  CHECK(satisfies_all(interp, assign, empty));

  ConstraintStore store = make_store({Constraint::member("x", "f", "y")});
  Assignment xy;
  xy.at = {{"x", 0}, {"y", 1}};
  CHECK_FALSE(satisfies_all(interp, xy, store));
  interp.relations["f"] = {{0, 1}};
  CHECK(satisfies_all(interp, xy, store));
}

TEST_CASE("canonical model of a single feature constraint") {
  NormalizeResult r = normalize(make_store({Constraint::feature("x", "f", "y")}));
  REQUIRE(r.verdict.is_consistent());
  CanonicalModel model = canonical_model(r.verdict.store());
  CHECK(model.interpretation.elements == std::vector<std::string>{"x", "y"});
  CHECK(model.interpretation.relations.at("f") ==
        std::set<std::pair<int, int>>{{0, 1}});
  CHECK(model.assignment.at.at("x") == 0);
  CHECK(model.assignment.at.at("y") == 1);
  CHECK(valid_interpretation(model.interpretation));
  CHECK(satisfies_all(model.interpretation, model.assignment,
                      r.verdict.store()));
}

TEST_CASE("canonical model reduces the precedence relation") {
  ConstraintStore nf = make_store({
      Constraint::closure("x", "p", ClosureKind::Plus, "y"),
      Constraint::closure("y", "p", ClosureKind::Plus, "z"),
      Constraint::closure("x", "p", ClosureKind::Plus, "z"),
  });
  REQUIRE(is_normal(nf));
  CanonicalModel model = canonical_model(nf);
  CHECK(model.interpretation.relations.at("p") ==
        std::set<std::pair<int, int>>{{idx(model.interpretation, "x"),
                                       idx(model.interpretation, "y")},
                                      {idx(model.interpretation, "y"),
                                       idx(model.interpretation, "z")}});
}

TEST_CASE("canonical model sends merged variables to one element") {
  NormalizeResult r = normalize(make_store({Constraint::eq("x", "y")}));
  REQUIRE(r.verdict.is_consistent());
  CanonicalModel model = canonical_model(r.verdict.store());
  CHECK(model.assignment.at.at("x") == model.assignment.at.at("y"));
  CHECK(model.interpretation.elements == std::vector<std::string>{"x"});
}

TEST_CASE("canonical model rejects unnormalized or clashing stores") {
  ConstraintStore redex = make_store({
      Constraint::feature("x", "f", "y"),
      Constraint::feature("x", "f", "z"),
  });
  CHECK_THROWS_WITH_AS(canonical_model(redex), doctest::Contains("Feat"),
                       Error);
  ConstraintStore clash(fgp_sig());
  clash.add(Constraint::closure("x", "p", ClosureKind::Plus, "x"));
  CHECK_THROWS_AS(canonical_model(clash), Error);
}

TEST_CASE("completeness holds on random consistent stores") {
  std::mt19937 rng(79);
  testing::GeneratorOptions opt;
  opt.var_count = 5;
  opt.feature_symbols = 2;
  opt.max_constraints = 7;
  opt.base_forms_only = true;
  int kept = 0;
  for (int round = 0; round < 400; ++round) {
    ConstraintStore input = testing::random_store(rng, opt);
    NormalizeResult r = normalize(input);
    if (!r.verdict.is_consistent()) continue;
    ++kept;
    CanonicalModel model = canonical_model(r.verdict.store());
    CHECK(valid_interpretation(model.interpretation));
    CHECK(satisfies_all(model.interpretation, model.assignment,
                        r.verdict.store()));
    // The original constraints hold as well, first-daughters included.
    CHECK(satisfies_all(model.interpretation, model.assignment, input));
  }
  CHECK(kept > 150);
}

TEST_CASE("linearize orders a diamond lexicographically") {
  ConstraintStore nf = make_store({
      Constraint::closure("a", "p", ClosureKind::Plus, "c"),
      Constraint::closure("b", "p", ClosureKind::Plus, "c"),
  });
  REQUIRE(is_normal(nf));
  CHECK(linearize(nf, "p") == std::vector<Variable>{"a", "b", "c"});
}

TEST_CASE("linearize of a store without precedence edges lists the variables") {
  ConstraintStore nf = make_store({Constraint::feature("x", "f", "x")});
  REQUIRE(is_normal(nf));
  CHECK(linearize(nf, "p") == std::vector<Variable>{"x"});
}

TEST_CASE("linearize keeps merged immediate successors adjacent") {
  NormalizeResult r = normalize(make_store({
      Constraint::imm_prec("x", "p", "y"),
      Constraint::imm_prec("x", "p", "z"),
  }));
  REQUIRE(r.verdict.is_consistent());
  CHECK(linearize(r.verdict.store(), "p") == std::vector<Variable>{"x", "y"});
}

TEST_CASE("linearize fails when adjacency is impossible") {
  // Both x and w demand y as their immediate successor. A DAG model
  // exists, but no total order of the three distinct representatives puts
  // y directly after both.
  NormalizeResult r = normalize(make_store({
      Constraint::imm_prec("x", "p", "y"),
      Constraint::imm_prec("w", "p", "y"),
  }));
  REQUIRE(r.verdict.is_consistent());
  CHECK_THROWS_AS(linearize(r.verdict.store(), "p"), Error);
}

TEST_CASE("linearize validates its precedence argument") {
  ConstraintStore nf(fgp_sig());
  CHECK_THROWS_AS(linearize(nf, "f"), Error);
  CHECK_THROWS_AS(linearize(nf, "q"), Error);
}

TEST_CASE("order_to_constraints emits consecutive closure edges") {
  Signature sig = fgp_sig();
  auto cs = order_to_constraints({"a", "b", "c"}, "p", sig);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0] == Constraint::closure("a", "p", ClosureKind::Plus, "b"));
  CHECK(cs[1] == Constraint::closure("b", "p", ClosureKind::Plus, "c"));
  CHECK(order_to_constraints({"a"}, "p", sig).empty());
  CHECK_THROWS_AS(order_to_constraints({"a", "b"}, "f", sig), Error);
  CHECK_THROWS_AS(order_to_constraints({"a", "a"}, "p", sig), Error);
}

TEST_CASE("linearization satisfies every precedence constraint") {
  std::mt19937 rng(83);
  testing::GeneratorOptions opt;
  opt.var_count = 5;
  opt.max_constraints = 7;
  opt.base_forms_only = true;
  int kept = 0;
  for (int round = 0; round < 300; ++round) {
    NormalizeResult r = normalize(testing::random_store(rng, opt));
    if (!r.verdict.is_consistent()) continue;
    ++kept;
    const ConstraintStore& nf = r.verdict.store();
    std::vector<Variable> order = linearize(nf, "p");

    CanonicalModel model = canonical_model(nf);
    std::set<std::pair<int, int>> consecutive;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      consecutive.insert({idx(model.interpretation, order[i]),
                          idx(model.interpretation, order[i + 1])});
    }
    model.interpretation.relations["p"] = consecutive;
    CHECK(valid_interpretation(model.interpretation));
    for (const auto& [key, c] : nf.constraints()) {
      bool about_p = (c.form == ConstraintForm::Closure ||
                      c.form == ConstraintForm::DomPrec) &&
                     c.p == "p";
      if (about_p) CHECK(evaluate(model.interpretation, model.assignment, c));
    }
  }
  CHECK(kept > 100);
}

TEST_CASE("model text lists relations then bindings") {
  NormalizeResult r = normalize(make_store({
      Constraint::feature("x", "f", "y"),
      Constraint::eq("x", "w"),
  }));
  REQUIRE(r.verdict.is_consistent());
  CanonicalModel model = canonical_model(r.verdict.store());
  CHECK(print_model(model, r.verdict.store()) ==
        "REL f : w -> y\nBIND x := w\n");
}

TEST_SUITE_END();
