#include <benchmark/benchmark.h>

#include <random>

#include "lpfl/oracle.hpp"
#include "lpfl/rewrite.hpp"
#include "lpfl/semantics.hpp"
#include "lpfl/syntax.hpp"

using namespace lpfl;

namespace {

// A plus-edge chain saturates to the full transitive closure, the worst
// case for the composition rule.
ConstraintStore chain_store(int length) {
  ConstraintStore store(Signature::declare({}, {"p"}));
  for (int i = 0; i + 1 < length; ++i) {
    auto name = [](int k) {
      return "v" + std::string(k < 10 ? "0" : "") + std::to_string(k);
    };
    store.add(
        Constraint::closure(name(i), "p", ClosureKind::Plus, name(i + 1)));
  }
  return store;
}

ConstraintStore random_mixed_store(int vars, int constraints, unsigned seed) {
  std::mt19937 rng(seed);
  Signature sig = Signature::declare({"f", "g"}, {"p"});
  ConstraintStore store(sig);
  auto name = [](int k) {
    return "v" + std::string(k < 10 ? "0" : "") + std::to_string(k);
  };
  auto var = [&] {
    return name(std::uniform_int_distribution<int>(0, vars - 1)(rng));
  };
  for (int i = 0; i < constraints; ++i) {
    switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
      case 0:
        store.add(Constraint::feature(var(), "f", var()));
        break;
      case 1:
        store.add(Constraint::member(var(), "g", var()));
        break;
      case 2:
        store.add(
            Constraint::closure(var(), "p", ClosureKind::Plus, var()));
        break;
      case 3:
        store.add(
            Constraint::closure(var(), "p", ClosureKind::Star, var()));
        break;
      case 4:
        store.add(Constraint::subset(var(), "f", "g", var()));
        break;
      default:
        store.add(Constraint::dom_prec("f", var(), "p", ClosureKind::Plus,
                                       "g", var()));
        break;
    }
  }
  return store;
}

void BM_normalize_chain(benchmark::State& state) {
  ConstraintStore store = chain_store(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize(store));
  }
}
BENCHMARK(BM_normalize_chain)->Arg(8)->Arg(16)->Arg(32);

void BM_normalize_random(benchmark::State& state) {
  ConstraintStore store = random_mixed_store(
      static_cast<int>(state.range(0)), 2 * static_cast<int>(state.range(0)),
      1234);
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize(store));
  }
}
BENCHMARK(BM_normalize_random)->Arg(8)->Arg(16)->Arg(32);

void BM_parse_print_roundtrip(benchmark::State& state) {
  std::string text = print_store(random_mixed_store(12, 30, 99));
  for (auto _ : state) {
    auto parsed = parse_program(text);
    benchmark::DoNotOptimize(parsed);
  }
}
BENCHMARK(BM_parse_print_roundtrip);

void BM_oracle_small(benchmark::State& state) {
  ConstraintStore store = random_mixed_store(3, 4, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_consistent(store));
  }
}
BENCHMARK(BM_oracle_small);

void BM_linearize(benchmark::State& state) {
  NormalizeResult r = normalize(chain_store(24));
  const ConstraintStore& nf = r.verdict.store();
  for (auto _ : state) {
    benchmark::DoNotOptimize(linearize(nf, "p"));
  }
}
BENCHMARK(BM_linearize);

}  // namespace

BENCHMARK_MAIN();
