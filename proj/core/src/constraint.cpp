#include "lpfl/constraint.hpp"

#include <utility>

namespace lpfl {

namespace {

const char* kind_mark(ClosureKind k) {
  return k == ClosureKind::Plus ? "+" : "*";
}

}  // namespace

Constraint Constraint::eq(Variable a, Variable b) {
  if (b < a) std::swap(a, b);
  Constraint c;
  c.form = ConstraintForm::Eq;
  c.x = std::move(a);
  c.y = std::move(b);
  return c;
}

Constraint Constraint::feature(Variable x, SymbolName f, Variable y) {
  Constraint c;
  c.form = ConstraintForm::Feature;
  c.x = std::move(x);
  c.f = std::move(f);
  c.y = std::move(y);
  return c;
}

Constraint Constraint::member(Variable x, SymbolName r, Variable y) {
  Constraint c;
  c.form = ConstraintForm::Member;
  c.x = std::move(x);
  c.f = std::move(r);
  c.y = std::move(y);
  return c;
}

Constraint Constraint::closure(Variable x, SymbolName p, ClosureKind k,
                               Variable y) {
  Constraint c;
  c.form = ConstraintForm::Closure;
  c.kind = k;
  c.x = std::move(x);
  c.p = std::move(p);
  c.y = std::move(y);
  return c;
}

Constraint Constraint::subset(Variable x, SymbolName f, SymbolName g,
                              Variable y) {
  Constraint c;
  c.form = ConstraintForm::Subset;
  c.x = std::move(x);
  c.f = std::move(f);
  c.g = std::move(g);
  c.y = std::move(y);
  return c;
}

Constraint Constraint::first_daughter(Variable x, SymbolName f, SymbolName p,
                                      Variable y) {
  Constraint c;
  c.form = ConstraintForm::FirstDaughter;
  c.x = std::move(x);
  c.f = std::move(f);
  c.p = std::move(p);
  c.y = std::move(y);
  return c;
}

Constraint Constraint::dom_prec(SymbolName f, Variable x, SymbolName p,
                                ClosureKind k, SymbolName g, Variable y) {
  Constraint c;
  c.form = ConstraintForm::DomPrec;
  c.kind = k;
  c.f = std::move(f);
  c.x = std::move(x);
  c.p = std::move(p);
  c.g = std::move(g);
  c.y = std::move(y);
  return c;
}

Constraint Constraint::imm_prec(Variable x, SymbolName p, Variable y) {
  Constraint c;
  c.form = ConstraintForm::ImmPrec;
  c.x = std::move(x);
  c.p = std::move(p);
  c.y = std::move(y);
  return c;
}

Constraint Constraint::inv_imm_prec(Variable x, SymbolName p, Variable y) {
  Constraint c;
  c.form = ConstraintForm::InvImmPrec;
  c.x = std::move(x);
  c.p = std::move(p);
  c.y = std::move(y);
  return c;
}

std::string Constraint::text() const {
  switch (form) {
    case ConstraintForm::Eq:
      return x + " = " + y;
    case ConstraintForm::Feature:
      return x + " = " + f + " : " + y;
    case ConstraintForm::Member:
      return x + " = E " + f + " : " + y;
    case ConstraintForm::Closure:
      return x + " = E " + p + kind_mark(kind) + " : " + y;
    case ConstraintForm::Subset:
      return x + " = " + f + " :>= " + g + "(" + y + ")";
    case ConstraintForm::FirstDaughter:
      return x + " = [" + f + " " + p + " 1] " + y;
    case ConstraintForm::DomPrec:
      return f + "(" + x + ") : " + p + kind_mark(kind) + " : " + g + "(" + y +
             ")";
    case ConstraintForm::ImmPrec:
      return x + " = " + p + " : " + y;
    case ConstraintForm::InvImmPrec:
      return x + " = " + p + "^-1 : " + y;
  }
  return {};
}

bool Constraint::is_tautology() const {
  if (form == ConstraintForm::Eq) return x == y;
  if (form == ConstraintForm::Closure)
    return kind == ClosureKind::Star && x == y;
  return false;
}

bool Constraint::is_self_plus() const {
  return form == ConstraintForm::Closure && kind == ClosureKind::Plus &&
         x == y;
}

}  // namespace lpfl
