#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "flp/desugar.hpp"
#include "flp/driver.hpp"
#include "flp/syntax.hpp"
#include "flp/term.hpp"

// Shared test plumbing: corpus loading, goal parsing, value-set views, and
// small random generators for the property tests.
namespace flpt {

using namespace flp;

inline std::string corpus_path(const std::string& name) {
  return std::string(FLP_CORPUS_DIR) + "/" + name;
}

inline LoadedProgram corpus(const std::string& name) { return load_file(corpus_path(name)); }

// Parse a goal and push rt annotations down to flags (no rrt handling).
inline ExprPtr goal(const LoadedProgram& lp, const std::string& text) {
  return desugar_rt(parse_expr(text, lp.program.symbols));
}

// Printed forms double as set elements: print_expr round-trips values, so
// this is injective where the tests use it, and failures read well.
inline std::set<std::string> printed(const std::vector<ExprPtr>& vs) {
  std::set<std::string> s;
  for (const ExprPtr& v : vs) s.insert(print_expr(v));
  return s;
}

inline std::set<std::string> engine_values(const LoadedProgram& lp, const std::string& g,
                                           EngineKind k, RunOptions opt = {}) {
  opt.engine = k;
  return printed(run_goal(lp, g, opt).answers);
}

// Random partial value over z, s/1, pair/2 and _|_.
inline ExprPtr random_pvalue(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 3);
  switch (pick(rng)) {
    case 0: return Expr::capp("z");
    case 1: return Expr::bottom();
    case 2: return Expr::capp("s", {random_pvalue(rng, depth - 1)});
    default:
      return Expr::capp("pair", {random_pvalue(rng, depth - 1), random_pvalue(rng, depth - 1)});
  }
}

// Replace a random sample of subterms by _|_ (keeps leq_approx below the
// input by construction).
inline ExprPtr random_prune(const ExprPtr& e, std::mt19937& rng) {
  std::uniform_int_distribution<int> coin(0, 4);
  if (coin(rng) == 0) return Expr::bottom();
  if (e->kind != ExprKind::CApp || e->args.empty()) return e;
  std::vector<ExprPtr> as;
  as.reserve(e->args.size());
  for (const ExprPtr& a : e->args) as.push_back(random_prune(a, rng));
  return Expr::capp(e->name, std::move(as));
}

}  // namespace flpt
