#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "lpfl/store.hpp"

namespace lpfl {

/// Position-carrying parse failure. line and column are 1-based.
struct ParseError {
  int line = 1;
  int column = 1;
  std::string message;

  std::string to_string() const;
};

/// Parses a constraint program:
///
///   program    := decl* stmt*
///   decl       := ("feature" | "prec") ident ("," ident)* ";"
///   stmt       := constraint "."
///   constraint := var "=" var
///              |  var "=" ident ":" var                  feature / imm. prec
///              |  var "=" "E" ident ["+"|"*"] ":" var    member / closure
///              |  var "=" ident ":>=" ident "(" var ")"  subset
///              |  var "=" "[" ident ident "1" "]" var    first daughter
///              |  ident "(" var ")" ":" ident ("+"|"*") ":" ident "(" var ")"
///              |  var "=" ident "^-1" ":" var            inverse imm. prec
///
/// "#" starts a comment running to end of line. Undeclared or wrongly
/// sorted symbols are reported as ParseError with the symbol's position.
std::variant<ConstraintStore, ParseError> parse_program(std::string_view text);

/// Canonical text form: declaration lines, then one statement per line
/// sorted lexicographically. Bindings print as equalities. Output depends
/// only on store contents, and parse_program(print_store(s)) == s whenever
/// s has no bindings and no expansion symbols.
std::string print_store(const ConstraintStore& store);

}  // namespace lpfl
