#pragma once

#include <utility>

#include "flp/syntax.hpp"
#include "flp/term.hpp"

namespace flp {

// Surface annotations never reach an engine. rt(e) pushes a per-occurrence
// flag onto every function application in its scope:
//
//   rt(X)       = X
//   rt(c(es))   = c(rt(es))
//   rt(f(es))   = f^rt(rt(es))
//   rt(rt(e))   = rt(e)
//
// rrt(e) is stronger: the whole evaluation of e switches to run-time
// choice. It is compiled by pairing e's hat copy with a transformed
// program (see rrt_transform below).

// Removes rt nodes. Identity on already-desugared expressions. Throws
// MalformedError on rrt or let nodes (handled by desugar_rrt / never occur).
ExprPtr desugar_rt(const ExprPtr& e);

// Desugars every rule body. rrt is a goal-only construct; a rule body
// containing it is a LoadError.
Program desugar_program(const SourceProgram& sp);

// f -> f$rrt; identity on names already carrying the suffix.
std::string hat_name(const std::string& fn);

// Replaces every function application by its rt-flagged hat copy:
//   X -> X,  c(es) -> c(rrtT(es)),  f(es) -> f$rrt^rt(rrtT(es)).
// Idempotent. Expects desugared input.
ExprPtr rrtT(const ExprPtr& e);

// P extended with a hat copy f$rrt for every function f: same patterns,
// right-hand sides transformed by rrtT. The original rules are untouched.
// A clash with an existing $rrt symbol is a TransformError.
Program rrt_transform(const Program& p);

// Full goal pipeline: eliminates rt and rrt, innermost first. Returns the
// desugared goal and the program to run it under (transformed only when
// some rrt occurred).
std::pair<ExprPtr, Program> desugar_rrt(const ExprPtr& e, const Program& p);

bool contains_rrt(const ExprPtr& e);

}  // namespace flp
