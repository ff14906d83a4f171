#include "lpfl/semantics.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lpfl/errors.hpp"
#include "lpfl/rewrite.hpp"

namespace lpfl {

namespace {

using Reach = std::vector<std::vector<bool>>;

Reach transitive_closure(const std::set<std::pair<int, int>>& rel, int n) {
  Reach reach(n, std::vector<bool>(n, false));
  for (const auto& [a, b] : rel) reach[a][b] = true;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  return reach;
}

const std::set<std::pair<int, int>>& relation_of(const Interpretation& interp,
                                                 const SymbolName& r) {
  static const std::set<std::pair<int, int>> empty;
  auto it = interp.relations.find(r);
  return it == interp.relations.end() ? empty : it->second;
}

std::set<int> image(const std::set<std::pair<int, int>>& rel, int e) {
  std::set<int> out;
  for (const auto& [a, b] : rel) {
    if (a == e) out.insert(b);
  }
  return out;
}

std::set<int> preimage(const std::set<std::pair<int, int>>& rel, int e) {
  std::set<int> out;
  for (const auto& [a, b] : rel) {
    if (b == e) out.insert(a);
  }
  return out;
}

int value(const Assignment& assign, const Variable& v) {
  auto it = assign.at.find(v);
  if (it == assign.at.end())
    throw std::invalid_argument("assignment is not total: missing '" + v + "'");
  return it->second;
}

}  // namespace

bool valid_interpretation(const Interpretation& interp) {
  for (const SymbolName& p : interp.precedence_symbols) {
    Reach reach = transitive_closure(relation_of(interp, p), interp.size());
    for (int i = 0; i < interp.size(); ++i) {
      if (reach[i][i]) return false;
    }
  }
  return true;
}

bool evaluate(const Interpretation& interp, const Assignment& assign,
              const Constraint& c) {
  switch (c.form) {
    case ConstraintForm::Eq:
      return value(assign, c.x) == value(assign, c.y);
    case ConstraintForm::Feature: {
      std::set<int> img = image(relation_of(interp, c.f), value(assign, c.x));
      return img.size() == 1 && *img.begin() == value(assign, c.y);
    }
    case ConstraintForm::Member:
      return relation_of(interp, c.f)
          .contains({value(assign, c.x), value(assign, c.y)});
    case ConstraintForm::Closure: {
      int ax = value(assign, c.x);
      int ay = value(assign, c.y);
      if (c.kind == ClosureKind::Star && ax == ay) return true;
      Reach reach = transitive_closure(relation_of(interp, c.p), interp.size());
      return reach[ax][ay];
    }
    case ConstraintForm::Subset: {
      std::set<int> fs = image(relation_of(interp, c.f), value(assign, c.x));
      std::set<int> gs = image(relation_of(interp, c.g), value(assign, c.y));
      return std::includes(fs.begin(), fs.end(), gs.begin(), gs.end());
    }
    case ConstraintForm::FirstDaughter: {
      int ax = value(assign, c.x);
      int ay = value(assign, c.y);
      std::set<int> fs = image(relation_of(interp, c.f), ax);
      if (!fs.contains(ay)) return false;
      Reach reach = transitive_closure(relation_of(interp, c.p), interp.size());
      for (int e : fs) {
        if (e != ay && !reach[ay][e]) return false;
      }
      return true;
    }
    case ConstraintForm::DomPrec: {
      std::set<int> fs = image(relation_of(interp, c.f), value(assign, c.x));
      std::set<int> gs = image(relation_of(interp, c.g), value(assign, c.y));
      Reach reach = transitive_closure(relation_of(interp, c.p), interp.size());
      for (int e1 : fs) {
        for (int e2 : gs) {
          bool ok = c.kind == ClosureKind::Star ? (e1 == e2 || reach[e1][e2])
                                                : reach[e1][e2];
          if (!ok) return false;
        }
      }
      return true;
    }
    case ConstraintForm::ImmPrec: {
      std::set<int> img = image(relation_of(interp, c.p), value(assign, c.x));
      return img.size() == 1 && *img.begin() == value(assign, c.y);
    }
    case ConstraintForm::InvImmPrec: {
      std::set<int> pre =
          preimage(relation_of(interp, c.p), value(assign, c.x));
      return pre.size() == 1 && *pre.begin() == value(assign, c.y);
    }
  }
  return false;
}

bool satisfies_all(const Interpretation& interp, const Assignment& assign,
                   const ConstraintStore& store) {
  for (const auto& [key, c] : store.constraints()) {
    if (!evaluate(interp, assign, c)) return false;
  }
  for (const auto& [from, to] : store.bindings()) {
    if (value(assign, from) != value(assign, to)) return false;
  }
  return true;
}

namespace {

void require_usable_normal_form(const ConstraintStore& store) {
  if (store.first_self_plus())
    raise(ErrorCode::ClashPresent, store.first_self_plus()->text());
  for (const auto& [key, c] : store.constraints()) {
    if (c.form == ConstraintForm::FirstDaughter)
      raise(ErrorCode::NotNormalForm,
            "first-daughter constraint not yet expanded: " + key);
  }
  if (!is_normal(store)) {
    raise(ErrorCode::NotNormalForm,
          "rule " + std::string(to_string(applicable_rule(store)->rule)) +
              " still applies");
  }
}

}  // namespace

CanonicalModel canonical_model(const ConstraintStore& normal_form) {
  require_usable_normal_form(normal_form);

  std::set<Variable> universe_vars;
  for (const auto& [key, c] : normal_form.constraints()) {
    universe_vars.insert(c.x);
    universe_vars.insert(c.y);
  }
  for (const auto& [from, to] : normal_form.bindings()) universe_vars.insert(to);

  CanonicalModel model;
  if (universe_vars.empty()) {
    model.interpretation.elements = {"u0"};
  } else {
    model.interpretation.elements.assign(universe_vars.begin(),
                                         universe_vars.end());
  }
  model.interpretation.precedence_symbols =
      normal_form.signature().precedences();

  std::map<std::string, int> index;
  for (int i = 0; i < model.interpretation.size(); ++i) {
    index[model.interpretation.elements[i]] = i;
  }

  for (const Variable& v : normal_form.variables()) {
    model.assignment.at[v] = index.at(normal_form.representative(v));
  }

  for (const auto& [key, c] : normal_form.constraints()) {
    if (c.form == ConstraintForm::Feature || c.form == ConstraintForm::Member) {
      if (normal_form.signature().is_feature(c.f)) {
        model.interpretation.relations[c.f].insert(
            {index.at(c.x), index.at(c.y)});
      }
    }
  }
  for (const SymbolName& p : normal_form.signature().precedences()) {
    for (const Variable& x : universe_vars) {
      for (const Variable& y : normal_form.succ_reduced(x, p)) {
        model.interpretation.relations[p].insert({index.at(x), index.at(y)});
      }
    }
  }
  return model;
}

std::vector<Variable> linearize(const ConstraintStore& normal_form,
                                const SymbolName& p) {
  const Signature& sig = normal_form.signature();
  if (!sig.is_precedence(p)) {
    if (sig.is_feature(p))
      raise(ErrorCode::SortMismatch, "'" + p + "' is a feature symbol");
    raise(ErrorCode::UndeclaredSymbol, "'" + p + "'");
  }
  require_usable_normal_form(normal_form);

  std::set<Variable> nodes;
  std::map<Variable, std::set<Variable>> preds;
  std::map<Variable, Variable> forced_next;  // ImmPrec: x directly before y
  std::map<Variable, Variable> forced_prev;  // InvImmPrec: x directly after y
  for (const auto& [key, c] : normal_form.constraints()) {
    if (c.form == ConstraintForm::Closure && c.p == p) {
      nodes.insert(c.x);
      nodes.insert(c.y);
      preds[c.y].insert(c.x);
    } else if (c.form == ConstraintForm::ImmPrec && c.p == p) {
      forced_next[c.x] = c.y;
    } else if (c.form == ConstraintForm::InvImmPrec && c.p == p) {
      forced_prev[c.x] = c.y;
    }
  }
  // A store with no closure edges over p leaves nothing to order; fall
  // back to all representatives so a lone variable still linearizes.
  if (nodes.empty()) {
    for (const Variable& v : normal_form.variables()) {
      nodes.insert(normal_form.representative(v));
    }
  }

  std::set<Variable> unplaced = nodes;
  auto ready = [&](const Variable& v) {
    auto it = preds.find(v);
    if (it == preds.end()) return true;
    for (const Variable& q : it->second) {
      if (unplaced.contains(q)) return false;
    }
    return true;
  };

  std::vector<Variable> order;
  const Variable* last = nullptr;
  while (!unplaced.empty()) {
    std::set<Variable> forced;
    if (last) {
      auto nx = forced_next.find(*last);
      if (nx != forced_next.end()) forced.insert(nx->second);
      for (const auto& [v, before] : forced_prev) {
        if (before == *last && unplaced.contains(v)) forced.insert(v);
      }
    }
    Variable pick;
    if (!forced.empty()) {
      if (forced.size() > 1)
        raise(ErrorCode::NotLinearizable,
              "two variables must directly follow '" + *last + "'");
      pick = *forced.begin();
      if (!unplaced.contains(pick) || !ready(pick))
        raise(ErrorCode::NotLinearizable,
              "'" + pick + "' cannot directly follow '" + *last + "'");
    } else {
      bool found = false;
      for (const Variable& v : unplaced) {
        if (!ready(v)) continue;
        // Variables that must sit directly after some other variable wait
        // for that variable to be placed.
        if (forced_prev.contains(v)) continue;
        bool is_someones_next = false;
        for (const auto& [u, w] : forced_next) {
          if (w == v && unplaced.contains(u)) {
            is_someones_next = true;
            break;
          }
        }
        if (is_someones_next) continue;
        pick = v;
        found = true;
        break;
      }
      if (!found)
        raise(ErrorCode::NotLinearizable,
              "no admissible next variable among the remaining ones");
    }
    order.push_back(pick);
    unplaced.erase(pick);
    last = &order.back();
  }

  for (const auto& [x, y] : forced_next) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i] != x) continue;
      if (i + 1 >= order.size() || order[i + 1] != y)
        raise(ErrorCode::NotLinearizable,
              "'" + x + "' and '" + y + "' did not come out adjacent");
    }
  }
  for (const auto& [v, before] : forced_prev) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i] != v) continue;
      if (i == 0 || order[i - 1] != before)
        raise(ErrorCode::NotLinearizable,
              "'" + before + "' and '" + v + "' did not come out adjacent");
    }
  }
  return order;
}

std::vector<Constraint> order_to_constraints(const std::vector<Variable>& order,
                                             const SymbolName& p,
                                             const Signature& sig) {
  if (!sig.is_precedence(p)) {
    if (sig.is_feature(p))
      raise(ErrorCode::SortMismatch, "'" + p + "' is a feature symbol");
    raise(ErrorCode::UndeclaredSymbol, "'" + p + "'");
  }
  std::set<Variable> seen;
  for (const Variable& v : order) {
    if (!seen.insert(v).second)
      raise(ErrorCode::DuplicateVariable, "'" + v + "'");
  }
  std::vector<Constraint> out;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    out.push_back(
        Constraint::closure(order[i], p, ClosureKind::Plus, order[i + 1]));
  }
  return out;
}

std::string print_model(const CanonicalModel& model,
                        const ConstraintStore& normal_form) {
  std::vector<std::string> rel_lines;
  for (const auto& [sym, pairs] : model.interpretation.relations) {
    for (const auto& [a, b] : pairs) {
      rel_lines.push_back("REL " + sym + " : " +
                          model.interpretation.elements[a] + " -> " +
                          model.interpretation.elements[b]);
    }
  }
  std::sort(rel_lines.begin(), rel_lines.end());

  std::ostringstream os;
  for (const auto& line : rel_lines) os << line << "\n";
  for (const auto& [from, to] : normal_form.bindings()) {
    os << "BIND " << from << " := " << to << "\n";
  }
  return os.str();
}

}  // namespace lpfl
