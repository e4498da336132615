#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flp/pop.hpp"
#include "flp/term.hpp"

namespace flp {

// One-step let-rewriting. Sharing is explicit: a non-copyable argument is
// first given a name (LetIn), evaluated in place (Fapp at the binding),
// and only substituted once it has become copyable (Bind). rt-flagged
// applications are copyable as they stand, so LetIn never extracts them.
//
//   Fapp   f(ps)theta -> r theta          theta images are rt-c-terms
//   LetIn  h(..., e, ...) -> let X = e in h(..., X, ...)
//          for unannotated function applications and lets, X fresh
//   Bind   let X = t in e -> e[X := t]    t an rt-c-term
//   Elim   let X = e1 in e2 -> e2         X not free in e2
//   Flat   let X = (let Y = e1 in e2) in e3 -> let Y = e1 in let X = e2 in e3
//          Y not free in e3 (renamed apart beforehand if needed)
//
// Every rule applies at any position (context closure). Successors of a
// hygienic state are hygienic: binders stay pairwise distinct and free
// variables never grow.

struct LetStep {
  std::string rule;  // "Fapp", "LetIn", "Bind", "Elim", "Flat"
  Path pos;
  ExprPtr result;
};

// All one-step successors, positions in post-order (innermost first, left
// to right), rule alternatives in program order within a position.
std::vector<LetStep> step_let(const ExprPtr& e, const Program& p);

// Bounded breadth-first enumeration of the c-term values reachable from a
// ground, desugared, bottom-free goal. States are memoized modulo alpha
// renaming of binders; memoize=false re-expands duplicates instead, which
// must not change the value set (checked by tests).
EnumResult enumerate_values_let(const ExprPtr& e, const Program& p, const SearchBounds& b,
                                bool memoize = true);

struct Derivation {
  ExprPtr initial;
  std::vector<LetStep> steps;
};

// A single derivation chosen by a fixed demonstration strategy: rule
// priority Bind > Elim > Flat > LetIn > Fapp, positions leftmost-innermost,
// rule alternatives in program order. Without a target this follows the
// first applicable step until no step applies or the step bound is hit.
// With a target, a depth-first search in strategy order looks for a
// derivation reaching it; nullopt when none exists within bounds.
std::optional<Derivation> trace_derivation(const ExprPtr& e, const Program& p,
                                           const SearchBounds& b, ExprPtr target = nullptr);

// Numbered lines "k. [Rule@pos] expr"; line 0 is the initial expression.
std::string format_derivation(const Derivation& d);

}  // namespace flp
