#include "lpfl_cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "lpfl/errors.hpp"
#include "lpfl/oracle.hpp"
#include "lpfl/rewrite.hpp"
#include "lpfl/semantics.hpp"
#include "lpfl/syntax.hpp"

namespace lpfl::cli {

namespace {

constexpr int kOk = 0;
constexpr int kInconsistent = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

std::optional<ConstraintStore> load(const std::string& path, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "lpfl: cannot open '" << path << "'\n";
    return std::nullopt;
  }
  std::ostringstream text;
  text << in.rdbuf();
  auto parsed = parse_program(text.str());
  if (auto* bad = std::get_if<ParseError>(&parsed)) {
    err << path << ": " << bad->to_string() << "\n";
    return std::nullopt;
  }
  return std::get<ConstraintStore>(std::move(parsed));
}

void print_trace(const std::vector<TraceStep>& trace, std::ostream& out) {
  for (const TraceStep& step : trace) {
    out << "RULE " << to_string(step.rule) << ":";
    bool first = true;
    for (const Constraint& c : step.consumed) {
      out << (first ? " " : " & ") << c.text();
      first = false;
    }
    out << " ==>";
    first = true;
    for (const Constraint& c : step.added) {
      out << (first ? " " : " & ") << c.text();
      first = false;
    }
    for (const auto& [absorbed, kept] : step.merges) {
      out << (first ? " " : " & ") << "[" << absorbed << " := " << kept << "]";
      first = false;
    }
    out << "\n";
  }
}

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int solve_command(const std::string& path, bool trace, std::ostream& out,
                  std::ostream& err) {
  auto store = load(path, err);
  if (!store) return kUsage;
  NormalizeResult result = normalize(*store);
  if (trace) print_trace(result.trace, out);
  if (!result.verdict.is_consistent()) {
    out << "CLASH: " << result.verdict.witness().text() << "\n";
    return kInconsistent;
  }
  out << print_store(result.verdict.store());
  return kOk;
}

int model_command(const std::string& path, std::ostream& out,
                  std::ostream& err) {
  auto store = load(path, err);
  if (!store) return kUsage;
  NormalizeResult result = normalize(*store);
  if (!result.verdict.is_consistent()) {
    out << "CLASH: " << result.verdict.witness().text() << "\n";
    return kInconsistent;
  }
  CanonicalModel model = canonical_model(result.verdict.store());
  if (!satisfies_all(model.interpretation, model.assignment,
                     result.verdict.store())) {
    err << "lpfl: warning: the canonical construction does not satisfy the\n"
           "  immediate-precedence constraints of this store; the model\n"
           "  shown covers the remaining constraints only\n";
  }
  out << print_model(model, result.verdict.store());
  return kOk;
}

int linearize_command(const std::string& path, const std::string& prec,
                      std::ostream& out, std::ostream& err) {
  auto store = load(path, err);
  if (!store) return kUsage;
  NormalizeResult result = normalize(*store);
  if (!result.verdict.is_consistent()) {
    out << "CLASH: " << result.verdict.witness().text() << "\n";
    return kInconsistent;
  }
  try {
    std::vector<Variable> order = linearize(result.verdict.store(), prec);
    out << "ORDER:";
    for (std::size_t i = 0; i < order.size(); ++i) {
      out << (i == 0 ? " " : ", ") << order[i];
    }
    out << "\n";
    return kOk;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotLinearizable) {
      out << "NOT LINEARIZABLE\n";
      return kInconsistent;
    }
    err << "lpfl: " << e.what() << "\n";
    return kUsage;
  }
}

int order_check_command(const std::string& path, const std::string& prec,
                        const std::string& order_csv, std::ostream& out,
                        std::ostream& err) {
  auto store = load(path, err);
  if (!store) return kUsage;
  std::vector<std::string> names = split_names(order_csv);
  if (names.empty()) {
    err << "lpfl: --order lists no variables\n";
    return kUsage;
  }
  std::vector<Variable> file_vars = store->variables();
  for (const std::string& name : names) {
    if (std::find(file_vars.begin(), file_vars.end(), name) ==
        file_vars.end()) {
      err << "lpfl: '" << name << "' does not occur in " << path << "\n";
      return kUsage;
    }
  }
  try {
    ConstraintStore composed = *store;
    for (const Constraint& c :
         order_to_constraints(names, prec, composed.signature())) {
      composed.add(c);
    }
    NormalizeResult result = normalize(composed);
    if (result.verdict.is_consistent()) {
      out << "CONSISTENT\n";
      return kOk;
    }
    out << "INCONSISTENT\n";
    return kInconsistent;
  } catch (const Error& e) {
    err << "lpfl: " << e.what() << "\n";
    return kUsage;
  }
}

int oracle_command(const std::string& path, int max_universe,
                   std::ostream& out, std::ostream& err) {
  auto store = load(path, err);
  if (!store) return kUsage;
  OracleBudget budget;
  budget.max_universe = max_universe;
  try {
    bool sat = brute_force_consistent(*store, budget);
    out << (sat ? "SAT" : "UNSAT") << "\n";
    return sat ? kOk : kInconsistent;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BudgetExceeded) {
      err << "lpfl: " << e.what() << "\n";
      return kBudget;
    }
    err << "lpfl: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Deterministic solver for feature logic with linear precedence"};
  app.name("lpfl");
  app.require_subcommand(1);

  std::string file;
  std::string prec;
  std::string order_csv;
  bool trace = false;
  int max_universe = 0;

  auto* solve = app.add_subcommand("solve", "Print the normal form or CLASH");
  solve->add_option("file", file, "constraint file")->required();
  solve->add_flag("--trace", trace, "print one line per rule firing");

  auto* model = app.add_subcommand("model", "Print the canonical model");
  model->add_option("file", file, "constraint file")->required();

  auto* linearize =
      app.add_subcommand("linearize", "Order the precedence DAG totally");
  linearize->add_option("file", file, "constraint file")->required();
  linearize->add_option("--prec", prec, "precedence symbol")->required();

  auto* order_check = app.add_subcommand(
      "order-check", "Check a word order against the constraints");
  order_check->add_option("file", file, "constraint file")->required();
  order_check->add_option("--prec", prec, "precedence symbol")->required();
  order_check->add_option("--order", order_csv, "comma-separated variables")
      ->required();

  auto* oracle = app.add_subcommand(
      "oracle", "Brute-force satisfiability over small universes");
  oracle->add_option("file", file, "constraint file")->required();
  oracle->add_option("--max-universe", max_universe,
                     "largest universe size to try (default: variable count)");

  std::vector<const char*> argv;
  argv.push_back("lpfl");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "lpfl: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  if (solve->parsed()) return solve_command(file, trace, out, err);
  if (model->parsed()) return model_command(file, out, err);
  if (linearize->parsed()) return linearize_command(file, prec, out, err);
  if (order_check->parsed())
    return order_check_command(file, prec, order_csv, out, err);
  if (oracle->parsed()) return oracle_command(file, max_universe, out, err);
  err << app.help();
  return kUsage;
}

}  // namespace lpfl::cli
