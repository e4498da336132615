#pragma once

#include <string>
#include <vector>

#include "flp/term.hpp"

namespace flp {

// Concrete syntax. One rule per line:
//
//   head(p1, ..., pn) -> rhs          a trailing '.' is accepted
//   % comment to end of line
//
// Identifiers starting with an uppercase letter are variables; lowercase
// identifiers are functions when some rule defines them and constructors
// otherwise (arity inferred from use and checked for consistency).
// Sugar: decimal numerals are Peano terms over z/s, "ab" is a list of
// character constructors, [x, y] is a cons/nil list, (a, b) is a tuple,
// e1 | e2 is alt(e1, e2), and e1 ++ e2 is concat(e1, e2). rt(e) and rrt(e)
// are surface annotations, eliminated by desugaring; f^rt(e) is the
// desugared spelling, accepted in goals for convenience.

struct SourceLoc {
  int line = 0;
  int col = 0;
};

struct SourceRule {
  std::string fn;
  std::vector<ExprPtr> params;
  ExprPtr rhs;  // may contain RtWrap/RrtWrap nodes
  SourceLoc loc;
};

struct SourceProgram {
  std::vector<SourceRule> rules;
  SymbolTable symbols;
};

// Parses program text. Diagnoses: arity inconsistencies, a name used both
// as constructor and function, non-linear patterns, function symbols or
// annotations inside patterns, extra right-hand-side variables.
SourceProgram parse_program(const std::string& text);

// Parses a goal expression against a known signature. Goals must be ground
// and may not introduce new symbols (builtin sugar aside).
ExprPtr parse_expr(const std::string& text, const SymbolTable& symbols);

std::string print_expr(const ExprPtr& e);

// The bundled prelude: lists, Peano arithmetic, alt/star combinators.
const std::string& prelude_text();
SourceProgram load_prelude();

}  // namespace flp
