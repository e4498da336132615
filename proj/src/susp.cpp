#include "flp/susp.hpp"

namespace flp {

const StatusRec& Store::get(SuspId id) const {
  auto it = m_.find(id);
  if (it == m_.end()) throw MalformedError("store: unknown suspension id");
  return it->second;
}

Store Store::with_new(SuspId id, SuspState st) const {
  Store out = *this;
  out.m_[id] = StatusRec{st, -1};
  return out;
}

Store Store::with_evaluated(SuspId id, NodeRef result) const {
  auto it = m_.find(id);
  if (it == m_.end()) throw MalformedError("store: recording result for unknown suspension");
  if (it->second.state != SuspState::Unevaluated)
    throw MalformedError("store: a suspension result may be recorded only once per branch");
  Store out = *this;
  out.m_[id] = StatusRec{SuspState::Evaluated, result};
  return out;
}

Solver::Solver(const Program& p) : prog_(p) {
  for (const Rule& r : p.rules) rule_index_[r.fn].push_back(&r);
}

NodeRef Solver::add_ctor(std::string sym, std::vector<NodeRef> args) {
  arena_.push_back(Node{false, std::move(sym), std::move(args), -1});
  return static_cast<NodeRef>(arena_.size() - 1);
}

std::pair<NodeRef, Store> Solver::add_susp(const std::string& fn, std::vector<NodeRef> args,
                                           bool rt, Store store) {
  SuspId id = next_susp_++;
  arena_.push_back(Node{true, fn, std::move(args), id});
  Store out = store.with_new(id, rt ? SuspState::Rt : SuspState::Unevaluated);
  return {static_cast<NodeRef>(arena_.size() - 1), out};
}

std::pair<NodeRef, Store> Solver::compile_goal(const ExprPtr& e, Store store) {
  switch (e->kind) {
    case ExprKind::CApp: {
      std::vector<NodeRef> args;
      args.reserve(e->args.size());
      for (const auto& a : e->args) {
        auto [r, s2] = compile_goal(a, std::move(store));
        args.push_back(r);
        store = std::move(s2);
      }
      return {add_ctor(e->name, std::move(args)), std::move(store)};
    }
    case ExprKind::FApp: {
      std::vector<NodeRef> args;
      args.reserve(e->args.size());
      for (const auto& a : e->args) {
        auto [r, s2] = compile_goal(a, std::move(store));
        args.push_back(r);
        store = std::move(s2);
      }
      return add_susp(e->name, std::move(args), e->rt_flag, std::move(store));
    }
    default:
      throw MalformedError("compile_goal: expects a ground, desugared goal");
  }
}

std::pair<NodeRef, Store> Solver::instantiate(const ExprPtr& rhs, const Env& env, Store store) {
  switch (rhs->kind) {
    case ExprKind::Var: {
      auto it = env.find(rhs->name);
      if (it == env.end()) throw MalformedError("instantiate: unbound rule variable");
      return {it->second, std::move(store)};
    }
    case ExprKind::CApp: {
      std::vector<NodeRef> args;
      args.reserve(rhs->args.size());
      for (const auto& a : rhs->args) {
        auto [r, s2] = instantiate(a, env, std::move(store));
        args.push_back(r);
        store = std::move(s2);
      }
      return {add_ctor(rhs->name, std::move(args)), std::move(store)};
    }
    case ExprKind::FApp: {
      std::vector<NodeRef> args;
      args.reserve(rhs->args.size());
      for (const auto& a : rhs->args) {
        auto [r, s2] = instantiate(a, env, std::move(store));
        args.push_back(r);
        store = std::move(s2);
      }
      return add_susp(rhs->name, std::move(args), rhs->rt_flag, std::move(store));
    }
    default:
      throw MalformedError("instantiate: rule bodies contain no let or bottom");
  }
}

bool Solver::hnf_rec(NodeRef ref, Store store, const HnfSink& sink) {
  const Node n = arena_[ref];  // by value: the arena may grow below
  if (!n.is_susp) return sink(ref, store);

  StatusRec st = store.get(n.susp_id);
  if (st.state == SuspState::Evaluated) return sink(st.result, store);
  bool record = st.state == SuspState::Unevaluated;

  if (depth_ >= limits_.max_depth) {
    truncated_ = true;  // cut this branch, keep enumerating others
    return true;
  }

  auto it = rule_index_.find(n.sym);
  if (it == rule_index_.end()) return true;  // no rules: a failure leaf

  // depth_ counts rule applications along the whole branch (continuations
  // included); restoring it here is what makes it per-branch rather than
  // per-call.
  const int saved = depth_;
  const std::vector<const Rule*>& rules = it->second;
  for (size_t idx = 0; idx < rules.size(); ++idx) {
    const Rule* r = rules[idx];
    depth_ = saved + 1;
    trace_.push_back({n.susp_id, static_cast<int>(idx)});
    bool keep_going =
        match_list(r->params, n.args, 0, store, Env{},
                   [&](const Env& env, const Store& s2) -> bool {
                     auto [body, s3] = instantiate(r->rhs, env, s2);
                     return hnf_rec(body, std::move(s3),
                                    [&](NodeRef h, const Store& s4) -> bool {
                                      if (record)
                                        return sink(h, s4.with_evaluated(n.susp_id, h));
                                      return sink(h, s4);
                                    });
                   });
    trace_.pop_back();
    if (!keep_going) return false;
  }
  depth_ = saved;
  return true;
}

bool Solver::match_list(const std::vector<ExprPtr>& pats, const std::vector<NodeRef>& refs,
                        size_t i, Store store, Env env,
                        const std::function<bool(const Env&, const Store&)>& k) {
  if (pats.size() != refs.size()) throw MalformedError("match_list: arity mismatch");
  if (i == pats.size()) return k(env, store);
  const ExprPtr& pat = pats[i];
  switch (pat->kind) {
    case ExprKind::Var: {
      env[pat->name] = refs[i];  // no demand: variables bind suspensions as-is
      return match_list(pats, refs, i + 1, std::move(store), std::move(env), k);
    }
    case ExprKind::CApp: {
      return hnf_rec(refs[i], std::move(store),
                     [&, i](NodeRef h, const Store& s2) -> bool {
                       // copy: the arena may reallocate during nested matching
                       const Node hn = arena_[h];
                       if (hn.is_susp || hn.sym != pat->name ||
                           hn.args.size() != pat->args.size())
                         return true;  // head mismatch: this alternative fails
                       std::vector<ExprPtr> pats2(pat->args);
                       pats2.insert(pats2.end(), pats.begin() + i + 1, pats.end());
                       std::vector<NodeRef> refs2(hn.args);
                       refs2.insert(refs2.end(), refs.begin() + i + 1, refs.end());
                       return match_list(pats2, refs2, 0, s2, env, k);
                     });
    }
    default:
      throw MalformedError("match_list: patterns are variables or constructor applications");
  }
}

bool Solver::normalize_rec(NodeRef ref, Store store, const ValueSink& sink) {
  return hnf_rec(ref, std::move(store), [&](NodeRef h, const Store& s) -> bool {
    // copy: nested normalization below can grow the arena
    const Node n = arena_[h];
    if (n.args.empty()) return sink(Expr::capp(n.sym), s);

    // normalize arguments left to right, accumulating value pieces
    std::function<bool(size_t, std::vector<ExprPtr>, const Store&)> go =
        [&](size_t i, std::vector<ExprPtr> acc, const Store& si) -> bool {
      if (i == n.args.size()) return sink(Expr::capp(n.sym, std::move(acc)), si);
      return normalize_rec(n.args[i], si, [&, i](const ExprPtr& v, const Store& s2) {
        auto acc2 = acc;
        acc2.push_back(v);
        return go(i + 1, std::move(acc2), s2);
      });
    };
    return go(0, {}, s);
  });
}

bool Solver::hnf(NodeRef ref, const Store& store, const HnfSink& sink) {
  depth_ = 0;
  return hnf_rec(ref, store, sink);
}

bool Solver::normalize(NodeRef ref, const Store& store, const ValueSink& sink) {
  depth_ = 0;
  return normalize_rec(ref, store, sink);
}

SolveResult Solver::solve(const ExprPtr& goal, const SolveLimits& limits) {
  if (contains_let(goal) || contains_bottom(goal))
    throw MalformedError("solve: goal must be a let-free, bottom-free expression");
  if (contains_surface_annotations(goal)) throw MalformedError("solve: goal is not desugared");
  if (!is_ground(goal)) throw MalformedError("solve: goal must be ground");

  limits_ = limits;
  truncated_ = false;
  trace_.clear();
  depth_ = 0;

  SolveResult res;
  auto [root, store] = compile_goal(goal, Store{});
  bool finished = normalize_rec(root, std::move(store),
                                [&](const ExprPtr& v, const Store&) -> bool {
                                  res.answers.push_back({v, trace_});
                                  return res.answers.size() < limits_.max_answers;
                                });
  res.exhausted = finished && !truncated_;
  return res;
}

SolveResult solve(const ExprPtr& goal, const Program& p, const SolveLimits& limits) {
  Solver s(p);
  return s.solve(goal, limits);
}

}  // namespace flp
