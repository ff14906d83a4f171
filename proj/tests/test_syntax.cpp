#include <doctest.h>

#include <random>

#include "lpfl/rewrite.hpp"
#include "lpfl/syntax.hpp"
#include "support/generators.hpp"

using namespace lpfl;

namespace {

ConstraintStore parse_ok(const std::string& text) {
  auto parsed = parse_program(text);
  if (auto* bad = std::get_if<ParseError>(&parsed)) {
    FAIL("unexpected parse error: ", bad->to_string());
  }
  return std::get<ConstraintStore>(std::move(parsed));
}

ParseError parse_bad(const std::string& text) {
  auto parsed = parse_program(text);
  REQUIRE(std::holds_alternative<ParseError>(parsed));
  return std::get<ParseError>(parsed);
}

}  // namespace

TEST_SUITE_BEGIN("syntax");

TEST_CASE("a feature statement maps to one constraint") {
  ConstraintStore store = parse_ok("feature f; prec p; x = f : y .");
  CHECK(store.size() == 1);
  CHECK(store.contains(Constraint::feature("x", "f", "y")));
}

TEST_CASE("undeclared symbols are reported with their position") {
  ParseError e = parse_bad("prec p; f(x) : p+ : g(y) .");
  CHECK(e.line == 1);
  CHECK(e.column == 9);
  CHECK(e.message.find("f") != std::string::npos);
  CHECK(e.message.find("undeclared") != std::string::npos);
}

TEST_CASE("domain precedence with star parses") {
  ConstraintStore store =
      parse_ok("feature dom; prec p; dom(x) : p* : dom(y) .");
  CHECK(store.contains(Constraint::dom_prec("dom", "x", "p",
                                            ClosureKind::Star, "dom", "y")));
}

TEST_CASE("every constraint form round-trips through its surface form") {
  std::string text =
      "feature f, g; prec p;\n"
      "x = y .\n"
      "x = f : y .\n"
      "x = E f : y .\n"
      "x = E p : y .\n"
      "x = E p+ : y .\n"
      "x = E p* : y .\n"
      "x = f :>= g(y) .\n"
      "x = [f p 1] y .\n"
      "f(x) : p+ : g(y) .\n"
      "f(x) : p* : g(y) .\n"
      "x = p : y .\n"
      "x = p^-1 : y .\n";
  ConstraintStore store = parse_ok(text);
  CHECK(store.size() == 12);
  CHECK(store.contains(Constraint::eq("x", "y")));
  CHECK(store.contains(Constraint::member("x", "p", "y")));
  CHECK(store.contains(Constraint::first_daughter("x", "f", "p", "y")));
  CHECK(store.contains(Constraint::imm_prec("x", "p", "y")));
  CHECK(store.contains(Constraint::inv_imm_prec("x", "p", "y")));
  ConstraintStore again = parse_ok(print_store(store));
  CHECK(again == store);
}

TEST_CASE("immediate precedence and feature share one surface shape") {
  ConstraintStore store = parse_ok("feature f; prec p; x = p : y . x = f : y .");
  CHECK(store.contains(Constraint::imm_prec("x", "p", "y")));
  CHECK(store.contains(Constraint::feature("x", "f", "y")));
}

TEST_CASE("printing is canonical") {
  Signature sig = Signature::declare({"f"}, {});
  ConstraintStore store(sig);
  store.add(Constraint::feature("x", "f", "y"));
  CHECK(print_store(store) == "feature f;\nx = f : y .\n");

  ConstraintStore empty(Signature::declare({"f"}, {"p"}));
  CHECK(print_store(empty) == "feature f;\nprec p;\n");

  ConstraintStore closure_store(Signature::declare({}, {"p"}));
  closure_store.add(Constraint::closure("x", "p", ClosureKind::Plus, "y"));
  CHECK(print_store(closure_store) == "prec p;\nx = E p+ : y .\n");
}

TEST_CASE("closure marks may be separated by whitespace") {
  ConstraintStore spaced = parse_ok("prec p; x = E p + : y .");
  ConstraintStore tight = parse_ok("prec p; x = E p+ : y .");
  CHECK(spaced == tight);
}

TEST_CASE("comments and blank lines are ignored") {
  ConstraintStore store = parse_ok(
      "# whole line\nfeature f;  # trailing\n\n   x = f : y . # done\n");
  CHECK(store.size() == 1);
}

TEST_CASE("syntax errors carry positions") {
  ParseError e = parse_bad("feature f;\nx = f y .");
  CHECK(e.line == 2);
  CHECK(e.column == 5);
}

TEST_CASE("declarations after statements are rejected") {
  parse_bad("feature f; x = f : y . prec p; x = E p+ : y .");
}

TEST_CASE("duplicate and clashing declarations point at the culprit") {
  ParseError dup = parse_bad("feature f, f; x = f : y .");
  CHECK(dup.message.find("declared twice") != std::string::npos);
  ParseError clash = parse_bad("feature f; prec f;");
  CHECK(clash.message.find("SortClash") != std::string::npos);
}

TEST_CASE("random stores round-trip exactly") {
  std::mt19937 rng(23);
  testing::GeneratorOptions opt;
  opt.var_count = 4;
  opt.feature_symbols = 2;
  opt.precedence_symbols = 2;
  opt.max_constraints = 7;
  for (int round = 0; round < 500; ++round) {
    ConstraintStore store = testing::random_store(rng, opt);
    ConstraintStore back = parse_ok(print_store(store));
    CHECK(back == store);
  }
}

TEST_CASE("printed output is insertion-order independent") {
  std::mt19937 rng(29);
  testing::GeneratorOptions opt;
  opt.max_constraints = 6;
  for (int round = 0; round < 100; ++round) {
    Signature sig = testing::make_signature(opt);
    std::vector<Constraint> cs;
    for (int i = 0; i < 6; ++i) {
      cs.push_back(testing::random_constraint(
          rng, opt, sig, testing::variable_pool(opt.var_count)));
    }
    ConstraintStore fwd(sig), rev(sig);
    for (const Constraint& c : cs) fwd.add(c);
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) rev.add(*it);
    CHECK(print_store(fwd) == print_store(rev));
  }
}

TEST_CASE("normal forms round-trip through one more normalize") {
  std::mt19937 rng(31);
  testing::GeneratorOptions opt;
  opt.allow_first_daughter = false;  // expansion symbols are not parseable
  opt.max_constraints = 6;
  opt.var_count = 4;
  int kept = 0;
  for (int round = 0; round < 300; ++round) {
    ConstraintStore store = testing::random_store(rng, opt);
    NormalizeResult result = normalize(store);
    if (!result.verdict.is_consistent()) continue;
    ++kept;
    const ConstraintStore& nf = result.verdict.store();
    ConstraintStore reparsed = parse_ok(print_store(nf));
    NormalizeResult again = normalize(reparsed);
    REQUIRE(again.verdict.is_consistent());
    CHECK(again.verdict.store() == nf);
  }
  CHECK(kept > 100);
}

TEST_SUITE_END();
