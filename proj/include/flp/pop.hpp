#pragma once

#include <cstddef>
#include <vector>

#include "flp/term.hpp"

namespace flp {

struct SearchBounds {
  int max_steps = 30;          // breadth-first depth limit
  size_t max_states = 100000;  // distinct states explored
};

struct EnumResult {
  std::vector<ExprPtr> values;  // discovery order, duplicate-free
  bool complete = true;         // false when a bound truncated the search
  size_t states_explored = 0;
};

// One-step relation of the proof-oriented calculus, as successor sets on
// ground expressions.
//
// (OR): at any function-rooted subterm f(es) (flagged or not), for any rule
// f(ps) -> r and matcher theta with rt-c-term-or-bottom images, rewrite the
// subterm to r theta. The flag on the redex head vanishes with the redex;
// flags inside the arguments travel with theta.
std::vector<ExprPtr> step_or(const ExprPtr& e, const Program& p);

// (B): collapse a subterm to _|_. The canonical variant fires only at
// function-rooted subterms; pruning constructor skeletons adds nothing but
// smaller partial values, which the downward closure restores anyway. The
// unrestricted variant (any non-bottom subterm) exists to validate exactly
// that claim by comparison.
std::vector<ExprPtr> step_b(const ExprPtr& e);
std::vector<ExprPtr> step_b_unrestricted(const ExprPtr& e);

// Bounded breadth-first closure of (OR) + (B) from a ground, desugared
// goal. Returns the downward closure (under leq_approx) of all reachable
// states that are partial values. complete=false when a bound was hit.
EnumResult reachable_pvalues(const ExprPtr& e, const Program& p, const SearchBounds& b,
                             bool unrestricted_b = false);

// Classical term rewriting: any rule at any position, no condition on the
// matcher. rt flags, if present, are ignored. Used by the rrt reference
// semantics below and nowhere else.
std::vector<ExprPtr> rewrite_ordinary_step(const ExprPtr& e, const Program& p);

// Reference semantics of rrt(e): the downward closure of the shells of
// every expression ordinarily reachable from e. Values with no _|_ inside
// are the "run-time choice" results of e.
EnumResult crwl_rrt_values(const ExprPtr& e, const Program& p, const SearchBounds& b);

// The subset of values containing no _|_.
std::vector<ExprPtr> total_values(const EnumResult& r);

}  // namespace flp
