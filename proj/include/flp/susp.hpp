#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "flp/term.hpp"

namespace flp {

// Demand-driven evaluation with explicit suspensions, the implementation
// technique behind the other two semantics. Every function application
// becomes a suspension node; constructor nodes are immutable. Sharing is
// representation-level: copying a parameter copies a node reference, never
// the node. A suspension's evaluation status lives in a persistent store
// threaded through evaluation, so alternatives explored on one branch
// cannot leak results into another.
//
// Status values:
//   Unevaluated   forced at most once per branch; the head-normal result is
//                 recorded and every later demand reuses it (call-time choice)
//   Evaluated     the recorded result
//   Rt            never recorded; every demand re-enumerates the rules
//                 (run-time choice)

using NodeRef = int;
using SuspId = int;

enum class SuspState { Unevaluated, Evaluated, Rt };

struct StatusRec {
  SuspState state = SuspState::Unevaluated;
  NodeRef result = -1;  // valid when state == Evaluated
};

class Store {
 public:
  const StatusRec& get(SuspId id) const;
  Store with_new(SuspId id, SuspState st) const;
  Store with_evaluated(SuspId id, NodeRef result) const;  // write-once per branch
  size_t size() const { return m_.size(); }

 private:
  std::map<SuspId, StatusRec> m_;
};

struct Node {
  bool is_susp = false;
  std::string sym;  // constructor name, or function name for suspensions
  std::vector<NodeRef> args;
  SuspId susp_id = -1;
};

struct RuleChoice {
  SuspId susp;
  int rule_index;  // index into the function's alternatives, program order
};

struct Answer {
  ExprPtr value;
  std::vector<RuleChoice> branch_trace;  // choices pinning this answer's branch
};

struct SolveLimits {
  size_t max_answers = 100;
  int max_depth = 2000;  // rule applications along one branch
};

struct SolveResult {
  std::vector<Answer> answers;  // depth-first order: rules in program order
  bool exhausted = true;        // false when a limit cut the enumeration
};

// One evaluation. Not reentrant: run one solve per Solver instance;
// concurrent evaluations get their own Solver over the shared Program.
class Solver {
 public:
  explicit Solver(const Program& p);

  // Translates a ground, desugared goal into the node graph. Every function
  // application occurrence becomes one fresh suspension (rt-flagged ones
  // enter the store as Rt).
  std::pair<NodeRef, Store> compile_goal(const ExprPtr& e, Store store);

  // Enumerates head-normal forms of a node, calling the sink with each
  // (constructor-rooted node, store) alternative in rule order. The sink
  // returns false to stop the whole enumeration; hnf mirrors that. A branch
  // that exceeds max_depth is cut and marks the result truncated.
  using HnfSink = std::function<bool(NodeRef, const Store&)>;
  bool hnf(NodeRef ref, const Store& store, const HnfSink& sink);

  // Enumerates fully evaluated c-term values of a node.
  using ValueSink = std::function<bool(const ExprPtr&, const Store&)>;
  bool normalize(NodeRef ref, const Store& store, const ValueSink& sink);

  SolveResult solve(const ExprPtr& goal, const SolveLimits& limits);

  const Node& node(NodeRef ref) const { return arena_[ref]; }

 private:
  using Env = std::map<std::string, NodeRef>;

  bool hnf_rec(NodeRef ref, Store store, const HnfSink& sink);
  bool match_list(const std::vector<ExprPtr>& pats, const std::vector<NodeRef>& refs, size_t i,
                  Store store, Env env,
                  const std::function<bool(const Env&, const Store&)>& k);
  bool normalize_rec(NodeRef ref, Store store, const ValueSink& sink);
  std::pair<NodeRef, Store> instantiate(const ExprPtr& rhs, const Env& env, Store store);
  NodeRef add_ctor(std::string sym, std::vector<NodeRef> args);
  std::pair<NodeRef, Store> add_susp(const std::string& fn, std::vector<NodeRef> args, bool rt,
                                     Store store);

  const Program& prog_;
  std::map<std::string, std::vector<const Rule*>> rule_index_;
  std::vector<Node> arena_;
  SuspId next_susp_ = 0;
  SolveLimits limits_;
  bool truncated_ = false;
  int depth_ = 0;  // rule applications along the current branch
  std::vector<RuleChoice> trace_;
};

SolveResult solve(const ExprPtr& goal, const Program& p, const SolveLimits& limits);

}  // namespace flp
