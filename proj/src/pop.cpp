#include "flp/pop.hpp"

#include <deque>
#include <unordered_set>

namespace flp {

namespace {

void validate_state(const ExprPtr& e) {
  if (contains_let(e)) throw MalformedError("pop calculus: let nodes are not part of this syntax");
  if (contains_surface_annotations(e))
    throw MalformedError("pop calculus: expression is not desugared");
  if (!is_ground(e)) throw MalformedError("pop calculus: goal must be ground");
}

}  // namespace

std::vector<ExprPtr> step_or(const ExprPtr& e, const Program& p) {
  std::vector<ExprPtr> out;
  for (const Position& pos : positions_postorder(e)) {
    if (pos.sub->kind != ExprKind::FApp) continue;
    for (const Rule* r : p.rules_for(pos.sub->name)) {
      if (auto theta = match_params(r->params, pos.sub->args, /*allow_bottom=*/true))
        out.push_back(replace_at(e, pos.path, apply_subst(r->rhs, *theta)));
    }
  }
  return out;
}

std::vector<ExprPtr> step_b(const ExprPtr& e) {
  std::vector<ExprPtr> out;
  for (const Position& pos : positions_postorder(e))
    if (pos.sub->kind == ExprKind::FApp) out.push_back(replace_at(e, pos.path, Expr::bottom()));
  return out;
}

std::vector<ExprPtr> step_b_unrestricted(const ExprPtr& e) {
  std::vector<ExprPtr> out;
  for (const Position& pos : positions_postorder(e))
    if (pos.sub->kind != ExprKind::Bottom) out.push_back(replace_at(e, pos.path, Expr::bottom()));
  return out;
}

namespace {

// All t' <= t. Written to keep shared subterm lists deduplicated by key.
void prunings_of(const ExprPtr& t, std::vector<ExprPtr>& out) {
  switch (t->kind) {
    case ExprKind::Bottom:
      out.push_back(t);
      return;
    case ExprKind::Var:
      out.push_back(t);
      out.push_back(Expr::bottom());
      return;
    case ExprKind::CApp: {
      if (t->args.empty()) {
        out.push_back(t);
        out.push_back(Expr::bottom());
        return;
      }
      std::vector<std::vector<ExprPtr>> per_arg(t->args.size());
      for (size_t i = 0; i < t->args.size(); ++i) prunings_of(t->args[i], per_arg[i]);
      // cartesian product over argument prunings
      std::vector<std::vector<ExprPtr>> combos{{}};
      for (const auto& choices : per_arg) {
        std::vector<std::vector<ExprPtr>> next;
        next.reserve(combos.size() * choices.size());
        for (const auto& c : combos)
          for (const auto& choice : choices) {
            auto c2 = c;
            c2.push_back(choice);
            next.push_back(std::move(c2));
          }
        combos = std::move(next);
      }
      for (auto& c : combos) out.push_back(Expr::capp(t->name, std::move(c)));
      out.push_back(Expr::bottom());
      return;
    }
    default:
      throw MalformedError("prunings_of expects a partial value");
  }
}

// Shared bounded BFS used by both enumerations. step produces successors;
// harvest decides what an explored state contributes to the value set.
template <typename StepFn, typename HarvestFn>
EnumResult bounded_bfs(const ExprPtr& start, const SearchBounds& b, StepFn step,
                       HarvestFn harvest) {
  EnumResult res;
  std::unordered_set<std::string> seen;
  std::unordered_set<std::string> value_keys;
  std::vector<ExprPtr> collected;  // discovery order, pre-closure

  auto collect = [&](const ExprPtr& v) {
    if (value_keys.insert(expr_key(v)).second) collected.push_back(v);
  };

  std::vector<ExprPtr> frontier{start};
  seen.insert(expr_key(start));
  harvest(start, collect);

  int depth = 0;
  bool truncated = false;
  while (!frontier.empty() && depth < b.max_steps && !truncated) {
    std::vector<ExprPtr> next;
    for (const ExprPtr& st : frontier) {
      for (const ExprPtr& succ : step(st)) {
        std::string k = expr_key(succ);
        if (seen.count(k)) continue;
        if (seen.size() >= b.max_states) {
          truncated = true;
          break;
        }
        seen.insert(std::move(k));
        harvest(succ, collect);
        next.push_back(succ);
      }
      if (truncated) break;
    }
    frontier = std::move(next);
    ++depth;
  }
  if (truncated || !frontier.empty()) res.complete = false;

  // Downward closure: every pruning of a collected value is a value.
  for (const ExprPtr& v : collected) {
    res.values.push_back(v);
    std::vector<ExprPtr> below;
    prunings_of(v, below);
    for (const ExprPtr& t : below)
      if (value_keys.insert(expr_key(t)).second) res.values.push_back(t);
  }
  res.states_explored = seen.size();
  return res;
}

}  // namespace

EnumResult reachable_pvalues(const ExprPtr& e, const Program& p, const SearchBounds& b,
                             bool unrestricted_b) {
  validate_state(e);
  auto step = [&](const ExprPtr& st) {
    std::vector<ExprPtr> succs = step_or(st, p);
    std::vector<ExprPtr> bs = unrestricted_b ? step_b_unrestricted(st) : step_b(st);
    succs.insert(succs.end(), bs.begin(), bs.end());
    return succs;
  };
  auto harvest = [](const ExprPtr& st, const auto& collect) {
    if (is_partial_value(st)) collect(st);
  };
  return bounded_bfs(e, b, step, harvest);
}

std::vector<ExprPtr> rewrite_ordinary_step(const ExprPtr& e, const Program& p) {
  std::vector<ExprPtr> out;
  for (const Position& pos : positions_postorder(e)) {
    if (pos.sub->kind != ExprKind::FApp) continue;
    for (const Rule* r : p.rules_for(pos.sub->name)) {
      if (auto theta = match_plain(r->params, pos.sub->args))
        out.push_back(replace_at(e, pos.path, apply_subst(r->rhs, *theta)));
    }
  }
  return out;
}

EnumResult crwl_rrt_values(const ExprPtr& e, const Program& p, const SearchBounds& b) {
  validate_state(e);
  if (contains_bottom(e)) throw MalformedError("rrt body must be bottom-free");
  auto step = [&](const ExprPtr& st) { return rewrite_ordinary_step(st, p); };
  auto harvest = [](const ExprPtr& st, const auto& collect) { collect(shell(st)); };
  return bounded_bfs(e, b, step, harvest);
}

std::vector<ExprPtr> total_values(const EnumResult& r) {
  std::vector<ExprPtr> out;
  for (const ExprPtr& v : r.values)
    if (!contains_bottom(v)) out.push_back(v);
  return out;
}

}  // namespace flp
