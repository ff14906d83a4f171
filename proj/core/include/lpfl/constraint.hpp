#pragma once

#include <cstdint>
#include <string>

#include "lpfl/signature.hpp"

namespace lpfl {

using Variable = std::string;

enum class ClosureKind : std::uint8_t { Plus, Star };

enum class ConstraintForm : std::uint8_t {
  Eq,             // x = y
  Feature,        // x = f : y
  Member,         // x = E r : y
  Closure,        // x = E p+ : y   /   x = E p* : y
  Subset,         // x = f :>= g(y)
  FirstDaughter,  // x = [f p 1] y
  DomPrec,        // f(x) : p+ : g(y)   /   f(x) : p* : g(y)
  ImmPrec,        // x = p : y
  InvImmPrec,     // x = p^-1 : y
};

/// One constraint of the language. Built through the factory functions,
/// which keep unused fields empty so equality stays structural. `f` holds
/// the relation symbol of Feature/Member and the left feature of
/// Subset/DomPrec/FirstDaughter; `g` the right feature of Subset/DomPrec;
/// `p` the precedence symbol of Closure/DomPrec/FirstDaughter/ImmPrec/
/// InvImmPrec.
struct Constraint {
  ConstraintForm form = ConstraintForm::Eq;
  ClosureKind kind = ClosureKind::Plus;
  Variable x;
  Variable y;
  SymbolName f;
  SymbolName g;
  SymbolName p;

  static Constraint eq(Variable a, Variable b);
  static Constraint feature(Variable x, SymbolName f, Variable y);
  static Constraint member(Variable x, SymbolName r, Variable y);
  static Constraint closure(Variable x, SymbolName p, ClosureKind k,
                            Variable y);
  static Constraint subset(Variable x, SymbolName f, SymbolName g, Variable y);
  static Constraint first_daughter(Variable x, SymbolName f, SymbolName p,
                                   Variable y);
  static Constraint dom_prec(SymbolName f, Variable x, SymbolName p,
                             ClosureKind k, SymbolName g, Variable y);
  static Constraint imm_prec(Variable x, SymbolName p, Variable y);
  static Constraint inv_imm_prec(Variable x, SymbolName p, Variable y);

  /// Canonical surface form without the trailing " ." of a statement.
  /// Store ordering, printing and rule-instance ordering all use it.
  std::string text() const;

  /// True for constraints every interpretation satisfies: x = x and
  /// x = E p* : x. These are dropped on insertion.
  bool is_tautology() const;

  /// True for x = E p+ : x, the one clash form.
  bool is_self_plus() const;

  bool operator==(const Constraint&) const = default;
};

}  // namespace lpfl
