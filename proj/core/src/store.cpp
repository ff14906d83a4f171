#include "lpfl/store.hpp"

#include <algorithm>
#include <set>

#include "lpfl/errors.hpp"

namespace lpfl {

namespace {

void require_var(const Variable& v) {
  if (!is_identifier(v))
    throw std::invalid_argument("variable '" + v + "' is not an identifier");
}

}  // namespace

void ConstraintStore::validate(const Constraint& c) const {
  require_var(c.x);
  require_var(c.y);
  auto need_feature = [&](const SymbolName& s) {
    if (sig_.is_feature(s)) return;
    if (sig_.is_precedence(s))
      raise(ErrorCode::SortMismatch, "'" + s + "' is a precedence symbol");
    raise(ErrorCode::UndeclaredSymbol, "'" + s + "'");
  };
  auto need_precedence = [&](const SymbolName& s) {
    if (sig_.is_precedence(s)) return;
    if (sig_.is_feature(s))
      raise(ErrorCode::SortMismatch, "'" + s + "' is a feature symbol");
    raise(ErrorCode::UndeclaredSymbol, "'" + s + "'");
  };
  switch (c.form) {
    case ConstraintForm::Eq:
      break;
    case ConstraintForm::Feature:
      need_feature(c.f);
      break;
    case ConstraintForm::Member:
      if (!sig_.is_declared(c.f)) raise(ErrorCode::UndeclaredSymbol, "'" + c.f + "'");
      break;
    case ConstraintForm::Closure:
      need_precedence(c.p);
      break;
    case ConstraintForm::Subset:
      need_feature(c.f);
      need_feature(c.g);
      break;
    case ConstraintForm::FirstDaughter:
      need_feature(c.f);
      need_precedence(c.p);
      break;
    case ConstraintForm::DomPrec:
      need_feature(c.f);
      need_feature(c.g);
      need_precedence(c.p);
      break;
    case ConstraintForm::ImmPrec:
    case ConstraintForm::InvImmPrec:
      need_precedence(c.p);
      break;
  }
}

Constraint ConstraintStore::rewrite_through_bindings(const Constraint& c) const {
  Constraint r = c;
  r.x = representative(c.x);
  r.y = representative(c.y);
  if (r.form == ConstraintForm::Eq && r.y < r.x) std::swap(r.x, r.y);
  return r;
}

void ConstraintStore::insert_canonical(const Constraint& c) {
  if (c.is_tautology()) return;
  constraints_.emplace(c.text(), c);
}

void ConstraintStore::add(const Constraint& c) {
  validate(c);
  insert_canonical(rewrite_through_bindings(c));
}

bool ConstraintStore::contains(const Constraint& c) const {
  Constraint k = c;
  if (k.form == ConstraintForm::Eq && k.y < k.x) std::swap(k.x, k.y);
  return constraints_.contains(k.text());
}

void ConstraintStore::remove(const Constraint& c) {
  Constraint k = c;
  if (k.form == ConstraintForm::Eq && k.y < k.x) std::swap(k.x, k.y);
  constraints_.erase(k.text());
}

Variable ConstraintStore::representative(const Variable& v) const {
  auto it = bindings_.find(v);
  return it == bindings_.end() ? v : it->second;
}

void ConstraintStore::merge(const Variable& a, const Variable& b) {
  Variable keep = representative(a);
  Variable gone = representative(b);
  if (keep == gone) return;
  if (gone < keep) std::swap(keep, gone);

  for (auto& [from, to] : bindings_) {
    if (to == gone) to = keep;
  }
  bindings_[gone] = keep;

  std::vector<Constraint> touched;
  for (auto it = constraints_.begin(); it != constraints_.end();) {
    if (it->second.x == gone || it->second.y == gone) {
      touched.push_back(it->second);
      it = constraints_.erase(it);
    } else {
      ++it;
    }
  }
  for (Constraint& c : touched) {
    if (c.x == gone) c.x = keep;
    if (c.y == gone) c.y = keep;
    if (c.form == ConstraintForm::Eq && c.y < c.x) std::swap(c.x, c.y);
    insert_canonical(c);
  }
}

std::vector<Variable> ConstraintStore::succ_feature(const Variable& x,
                                                    const SymbolName& f) const {
  std::set<Variable> out;
  for (const auto& [key, c] : constraints_) {
    if (c.x != x) continue;
    if ((c.form == ConstraintForm::Feature ||
         c.form == ConstraintForm::Member) &&
        c.f == f) {
      out.insert(c.y);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<Variable> ConstraintStore::succ_reduced(const Variable& x,
                                                    const SymbolName& p) const {
  std::set<Variable> direct;
  std::set<std::pair<Variable, Variable>> edges;
  for (const auto& [key, c] : constraints_) {
    if (c.form != ConstraintForm::Closure || c.p != p) continue;
    edges.insert({c.x, c.y});
    if (c.x == x) direct.insert(c.y);
  }
  std::vector<Variable> out;
  for (const Variable& y : direct) {
    bool composed = false;
    for (const Variable& z : direct) {
      if (edges.contains({z, y})) {
        composed = true;
        break;
      }
    }
    if (!composed) out.push_back(y);
  }
  return out;
}

std::vector<Variable> ConstraintStore::variables() const {
  std::set<Variable> vars;
  for (const auto& [key, c] : constraints_) {
    vars.insert(c.x);
    vars.insert(c.y);
  }
  for (const auto& [from, to] : bindings_) {
    vars.insert(from);
    vars.insert(to);
  }
  return {vars.begin(), vars.end()};
}

const Constraint* ConstraintStore::first_self_plus() const {
  for (const auto& [key, c] : constraints_) {
    if (c.is_self_plus()) return &c;
  }
  return nullptr;
}

}  // namespace lpfl
