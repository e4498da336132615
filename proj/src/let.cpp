#include "flp/let.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "flp/syntax.hpp"

namespace flp {

namespace {

void validate_goal(const ExprPtr& e) {
  if (contains_bottom(e)) throw MalformedError("let rewriting: goal must be bottom-free");
  if (contains_surface_annotations(e))
    throw MalformedError("let rewriting: expression is not desugared");
  if (!is_ground(e)) throw MalformedError("let rewriting: goal must be ground");
}

bool letin_extractable(const ExprPtr& arg) {
  return (arg->kind == ExprKind::FApp && !arg->rt_flag) || arg->kind == ExprKind::Let;
}

}  // namespace

std::vector<LetStep> step_let(const ExprPtr& e, const Program& p) {
  std::vector<LetStep> out;
  for (const Position& pos : positions_postorder(e)) {
    const ExprPtr& s = pos.sub;
    switch (s->kind) {
      case ExprKind::Bottom:
      case ExprKind::RtWrap:
      case ExprKind::RrtWrap:
        throw MalformedError("step_let: state contains bottom or surface annotations");
      case ExprKind::Var:
        break;
      case ExprKind::FApp:
        for (const Rule* r : p.rules_for(s->name)) {
          if (auto theta = match_params(r->params, s->args, /*allow_bottom=*/false))
            out.push_back({"Fapp", pos.path, replace_at(e, pos.path, apply_subst(r->rhs, *theta))});
        }
        [[fallthrough]];
      case ExprKind::CApp:
        for (size_t i = 0; i < s->args.size(); ++i) {
          if (!letin_extractable(s->args[i])) continue;
          std::string x = fresh_var("X", all_vars(e));
          auto app = std::make_shared<Expr>(*s);
          app->args[i] = Expr::var(x);
          ExprPtr inner = Expr::let_in(x, s->args[i], app);
          out.push_back({"LetIn", pos.path, replace_at(e, pos.path, inner)});
        }
        break;
      case ExprKind::Let: {
        if (is_rtcterm_lenient(s->bound(), /*allow_bottom=*/false)) {
          Subst theta;
          theta.bind(s->name, s->bound());
          out.push_back({"Bind", pos.path, replace_at(e, pos.path, apply_subst(s->body(), theta))});
        }
        if (!free_vars(s->body()).count(s->name))
          out.push_back({"Elim", pos.path, replace_at(e, pos.path, s->body())});
        if (s->bound()->kind == ExprKind::Let) {
          ExprPtr inner = s->bound();
          std::string y = inner->name;
          ExprPtr e1 = inner->bound();
          ExprPtr e2 = inner->body();
          if (free_vars(s->body()).count(y)) {
            // rename the inner binder apart before reassociating
            std::string y2 = fresh_var(y, all_vars(e));
            Subst ren;
            ren.bind(y, Expr::var(y2));
            e2 = apply_subst(e2, ren);
            y = y2;
          }
          ExprPtr flat = Expr::let_in(y, e1, Expr::let_in(s->name, e2, s->body()));
          out.push_back({"Flat", pos.path, replace_at(e, pos.path, flat)});
        }
        break;
      }
    }
  }
  return out;
}

EnumResult enumerate_values_let(const ExprPtr& e, const Program& p, const SearchBounds& b,
                                bool memoize) {
  validate_goal(e);
  EnumResult res;
  std::unordered_set<std::string> seen;
  std::unordered_set<std::string> value_keys;
  size_t expanded = 0;

  ExprPtr start = alpha_normalize(e);
  auto note = [&](const ExprPtr& st) {
    if (is_cterm(st) && value_keys.insert(expr_key(st)).second) res.values.push_back(st);
  };

  std::vector<ExprPtr> frontier{start};
  seen.insert(expr_key(start));
  note(start);

  int depth = 0;
  bool truncated = false;
  while (!frontier.empty() && depth < b.max_steps && !truncated) {
    std::vector<ExprPtr> next;
    for (const ExprPtr& st : frontier) {
      for (const LetStep& step : step_let(st, p)) {
        ExprPtr succ = alpha_normalize(step.result);
        if (memoize) {
          std::string k = expr_key(succ);
          if (seen.count(k)) continue;
          if (seen.size() >= b.max_states) {
            truncated = true;
            break;
          }
          seen.insert(std::move(k));
        } else {
          if (++expanded >= b.max_states) {
            truncated = true;
            break;
          }
        }
        note(succ);
        next.push_back(std::move(succ));
      }
      if (truncated) break;
    }
    frontier = std::move(next);
    ++depth;
  }
  if (truncated || !frontier.empty()) res.complete = false;
  res.states_explored = memoize ? seen.size() : expanded + 1;
  return res;
}

namespace {

int rule_priority(const std::string& rule) {
  if (rule == "Bind") return 0;
  if (rule == "Elim") return 1;
  if (rule == "Flat") return 2;
  if (rule == "LetIn") return 3;
  return 4;  // Fapp
}

// Successors ordered by the demonstration strategy. step_let already emits
// positions innermost-first and rule alternatives in program order, so a
// stable sort on priority alone realizes the full ordering.
std::vector<LetStep> strategy_steps(const ExprPtr& e, const Program& p) {
  std::vector<LetStep> steps = step_let(e, p);
  std::stable_sort(steps.begin(), steps.end(), [](const LetStep& a, const LetStep& b) {
    return rule_priority(a.rule) < rule_priority(b.rule);
  });
  return steps;
}

}  // namespace

std::optional<Derivation> trace_derivation(const ExprPtr& e, const Program& p,
                                           const SearchBounds& b, ExprPtr target) {
  validate_goal(e);
  Derivation d{e, {}};

  if (!target) {
    ExprPtr cur = e;
    for (int k = 0; k < b.max_steps; ++k) {
      std::vector<LetStep> steps = strategy_steps(cur, p);
      if (steps.empty()) break;
      d.steps.push_back(steps.front());
      cur = steps.front().result;
    }
    return d;
  }

  // Depth-first search in strategy order. A state is re-expanded when
  // reached at a strictly smaller depth, so the depth bound cannot hide a
  // reachable target behind an earlier deep visit.
  struct Frame {
    ExprPtr state;
    std::vector<LetStep> steps;
    size_t next = 0;
  };
  std::unordered_map<std::string, int> best_depth;
  size_t expansions = 0;

  std::vector<Frame> stack;
  stack.push_back({e, strategy_steps(e, p), 0});
  best_depth[expr_key(alpha_normalize(e))] = 0;
  if (expr_equal(e, target)) return d;

  while (!stack.empty()) {
    Frame& top = stack.back();
    int depth = static_cast<int>(stack.size());  // depth of a successor of top
    if (top.next >= top.steps.size() || depth > b.max_steps) {
      stack.pop_back();
      continue;
    }
    LetStep step = top.steps[top.next++];
    if (expr_equal(step.result, target)) {
      // every frame's last consumed step is the edge into the frame above;
      // the top frame's is the step just taken
      for (const Frame& f : stack) d.steps.push_back(f.steps[f.next - 1]);
      return d;
    }
    std::string k = expr_key(alpha_normalize(step.result));
    auto it = best_depth.find(k);
    if (it != best_depth.end() && it->second <= depth) continue;
    best_depth[k] = depth;
    if (++expansions >= b.max_states) return std::nullopt;
    if (depth < b.max_steps)
      stack.push_back({step.result, strategy_steps(step.result, p), 0});
  }
  return std::nullopt;
}

std::string format_derivation(const Derivation& d) {
  std::string out = "0. " + print_expr(d.initial) + "\n";
  for (size_t i = 0; i < d.steps.size(); ++i) {
    const LetStep& s = d.steps[i];
    out += std::to_string(i + 1) + ". [" + s.rule + "@" + path_to_string(s.pos) + "] " +
           print_expr(s.result) + "\n";
  }
  return out;
}

}  // namespace flp
