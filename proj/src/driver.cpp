#include "flp/driver.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "flp/desugar.hpp"
#include "flp/errors.hpp"

namespace flp {

std::string engine_name(EngineKind k) {
  switch (k) {
    case EngineKind::Pop: return "pop";
    case EngineKind::Let: return "let";
    case EngineKind::Susp: return "susp";
  }
  return "?";
}

std::optional<EngineKind> engine_from_name(const std::string& s) {
  if (s == "pop") return EngineKind::Pop;
  if (s == "let") return EngineKind::Let;
  if (s == "susp") return EngineKind::Susp;
  return std::nullopt;
}

namespace {

const std::set<std::string>& prelude_functions() {
  static const std::set<std::string> fns = [] {
    std::set<std::string> s;
    for (const auto& r : load_prelude().rules) s.insert(r.fn);
    return s;
  }();
  return fns;
}

}  // namespace

LoadedProgram load_base() { return {desugar_program(load_prelude())}; }

LoadedProgram load_text(const std::string& text) {
  std::string user = text;
  if (!user.empty() && user.back() != '\n') user += '\n';
  const size_t user_lines = static_cast<size_t>(std::count(user.begin(), user.end(), '\n'));
  // User text first keeps its diagnostics' line numbers honest; rule order
  // within each function is what matters to the engines, and that is
  // preserved either way.
  SourceProgram sp = parse_program(user + prelude_text());
  for (const auto& r : sp.rules) {
    if (static_cast<size_t>(r.loc.line) <= user_lines && prelude_functions().count(r.fn))
      throw LoadError("redefinition of prelude function '" + r.fn + "'");
  }
  return {desugar_program(sp)};
}

LoadedProgram load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw LoadError("cannot open file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return load_text(buf.str());
}

GoalRun run_goal(const LoadedProgram& lp, const std::string& goal_text, const RunOptions& opt) {
  ExprPtr g0 = parse_expr(goal_text, lp.program.symbols);
  if (opt.force_rrt) g0 = Expr::rrt_wrap(g0);
  const auto pr = desugar_rrt(g0, lp.program);
  const ExprPtr& goal = pr.first;
  const Program& prog = pr.second;

  GoalRun run;
  switch (opt.engine) {
    case EngineKind::Pop: {
      EnumResult r = reachable_pvalues(goal, prog, opt.bounds);
      run.answers = total_values(r);
      run.complete = r.complete;
      if (opt.trace) run.notes.push_back("note: derivation tracing needs the let engine");
      break;
    }
    case EngineKind::Let: {
      EnumResult r = enumerate_values_let(goal, prog, opt.bounds, opt.memoize);
      run.answers = r.values;
      run.complete = r.complete;
      if (opt.trace) {
        if (auto d = trace_derivation(goal, prog, opt.bounds))
          run.trace_text = format_derivation(*d);
      }
      break;
    }
    case EngineKind::Susp: {
      SolveResult s = solve(goal, prog, opt.limits);
      run.answers.reserve(s.answers.size());
      for (const Answer& a : s.answers) run.answers.push_back(a.value);
      run.complete = s.exhausted;
      if (opt.trace) {
        std::ostringstream os;
        for (size_t i = 0; i < s.answers.size(); ++i) {
          os << "branch " << i + 1 << ":";
          for (const RuleChoice& c : s.answers[i].branch_trace)
            os << " s" << c.susp << ".r" << c.rule_index;
          os << "\n";
        }
        run.trace_text = os.str();
      }
      break;
    }
  }
  return run;
}

int print_run(const GoalRun& r, std::ostream& out) {
  if (!r.trace_text.empty()) out << r.trace_text;
  for (const ExprPtr& a : r.answers) out << print_expr(a) << "\n";
  out << (r.complete ? "no more answers." : "search bound reached.") << "\n";
  return r.answers.empty() ? 1 : 0;
}

namespace {

int expr_size(const ExprPtr& e) {
  int n = 1;
  switch (e->kind) {
    case ExprKind::Let:
      return 1 + expr_size(e->bound()) + expr_size(e->body());
    case ExprKind::RtWrap:
    case ExprKind::RrtWrap:
      return 1 + expr_size(e->inner());
    default:
      for (const ExprPtr& a : e->args) n += expr_size(a);
      return n;
  }
}

// Deduplicate and order by (size, key): small values first, ties broken
// deterministically.
std::vector<ExprPtr> canon_values(const std::vector<ExprPtr>& vs) {
  std::map<std::string, ExprPtr> by_key;
  for (const ExprPtr& v : vs) by_key.emplace(expr_key(v), v);
  std::vector<ExprPtr> out;
  out.reserve(by_key.size());
  for (const auto& [k, v] : by_key) out.push_back(v);
  std::stable_sort(out.begin(), out.end(), [](const ExprPtr& a, const ExprPtr& b) {
    int sa = expr_size(a), sb = expr_size(b);
    if (sa != sb) return sa < sb;
    return expr_key(a) < expr_key(b);
  });
  return out;
}

std::string join_values(const std::vector<ExprPtr>& vs) {
  std::string s = "{";
  for (size_t i = 0; i < vs.size(); ++i) {
    if (i) s += ", ";
    s += print_expr(vs[i]);
  }
  s += "}";
  return s;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '\\' || c == '"') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

CompareReport compare_engines(const LoadedProgram& lp, const std::string& goal_text,
                              const RunOptions& opt) {
  CompareReport rep;
  for (EngineKind k : {EngineKind::Pop, EngineKind::Let, EngineKind::Susp}) {
    RunOptions o = opt;
    o.engine = k;
    o.trace = false;
    o.compare = false;
    o.dot_path.clear();
    GoalRun r = run_goal(lp, goal_text, o);
    rep.engines.push_back({k, canon_values(r.answers), r.complete});
  }

  std::map<std::string, ExprPtr> all;
  std::vector<std::set<std::string>> keys(rep.engines.size());
  for (size_t i = 0; i < rep.engines.size(); ++i) {
    for (const ExprPtr& v : rep.engines[i].values) {
      std::string k = expr_key(v);
      all.emplace(k, v);
      keys[i].insert(std::move(k));
    }
  }
  std::vector<ExprPtr> disputed;
  for (const auto& [k, v] : all) {
    bool everywhere = true;
    for (const auto& ks : keys) everywhere = everywhere && ks.count(k) > 0;
    if (!everywhere) disputed.push_back(v);
  }
  rep.agree = disputed.empty();
  if (!rep.agree) {
    disputed = canon_values(disputed);
    rep.witness = disputed.front();
  }
  return rep;
}

std::string format_compare(const CompareReport& r) {
  std::ostringstream os;
  std::map<std::string, ExprPtr> all;
  for (const EngineReport& er : r.engines)
    for (const ExprPtr& v : er.values) all.emplace(expr_key(v), v);
  for (const EngineReport& er : r.engines) {
    std::string name = engine_name(er.engine);
    name.resize(5, ' ');
    os << name << join_values(er.values);
    if (!er.complete) os << "  [bounds hit]";
    os << "\n";
  }
  if (r.agree) {
    os << "verdict: PASS\n";
    return os.str();
  }
  os << "verdict: DIFF\n";
  for (const EngineReport& er : r.engines) {
    std::set<std::string> mine;
    for (const ExprPtr& v : er.values) mine.insert(expr_key(v));
    std::vector<ExprPtr> lacks;
    for (const auto& [k, v] : all)
      if (!mine.count(k)) lacks.push_back(v);
    if (!lacks.empty())
      os << engine_name(er.engine) << " lacks: " << join_values(canon_values(lacks)) << "\n";
  }
  os << "witness: " << print_expr(r.witness) << "\n";
  return os.str();
}

std::string reduction_graph_dot(const LoadedProgram& lp, const std::string& goal_text,
                                const RunOptions& opt) {
  if (opt.engine == EngineKind::Susp)
    throw LoadError("the reduction graph export needs a calculus engine (pop or let)");
  ExprPtr g0 = parse_expr(goal_text, lp.program.symbols);
  if (opt.force_rrt) g0 = Expr::rrt_wrap(g0);
  const auto pr = desugar_rrt(g0, lp.program);
  const Program& prog = pr.second;
  const bool let_mode = opt.engine == EngineKind::Let;
  ExprPtr goal = let_mode ? alpha_normalize(pr.first) : pr.first;

  struct Edge {
    int from, to;
    std::string label;
  };
  std::map<std::string, int> id_of;
  std::vector<ExprPtr> nodes;
  std::vector<Edge> edges;
  std::set<std::string> edge_seen;

  auto intern = [&](const ExprPtr& e) {
    std::string k = expr_key(e);
    auto it = id_of.find(k);
    if (it != id_of.end()) return std::pair<int, bool>{it->second, false};
    int id = static_cast<int>(nodes.size());
    id_of.emplace(std::move(k), id);
    nodes.push_back(e);
    return std::pair<int, bool>{id, true};
  };

  std::vector<int> frontier{intern(goal).first};
  for (int depth = 0; depth < opt.bounds.max_steps && !frontier.empty(); ++depth) {
    std::vector<int> next;
    for (int id : frontier) {
      if (nodes.size() >= opt.bounds.max_states) break;
      ExprPtr e = nodes[static_cast<size_t>(id)];
      auto add = [&](const ExprPtr& succ0, const std::string& label) {
        ExprPtr succ = let_mode ? alpha_normalize(succ0) : succ0;
        auto [sid, fresh] = intern(succ);
        std::string ek = std::to_string(id) + ">" + std::to_string(sid) + "|" + label;
        if (edge_seen.insert(std::move(ek)).second) edges.push_back({id, sid, label});
        if (fresh) next.push_back(sid);
      };
      if (let_mode) {
        for (const LetStep& st : step_let(e, prog)) add(st.result, st.rule);
      } else {
        for (const ExprPtr& s : step_or(e, prog)) add(s, "OR");
        for (const ExprPtr& s : step_b(e)) add(s, "B");
      }
    }
    frontier = std::move(next);
  }

  std::ostringstream os;
  os << "digraph reduction {\n";
  os << "  rankdir=TB;\n";
  os << "  node [shape=box, fontname=\"monospace\"];\n";
  for (size_t i = 0; i < nodes.size(); ++i)
    os << "  n" << i << " [label=\"" << dot_escape(print_expr(nodes[i])) << "\"];\n";
  for (const Edge& ed : edges)
    os << "  n" << ed.from << " -> n" << ed.to << " [label=\"" << dot_escape(ed.label)
       << "\"];\n";
  os << "}\n";
  return os.str();
}

int run_file(const std::string& path, const std::string& goal_text, const RunOptions& opt,
             std::ostream& out, std::ostream& err) {
  try {
    LoadedProgram lp = path.empty() ? load_base() : load_file(path);
    if (!opt.dot_path.empty()) {
      std::string dot = reduction_graph_dot(lp, goal_text, opt);
      std::ofstream f(opt.dot_path);
      if (!f) throw LoadError("cannot write dot file: " + opt.dot_path);
      f << dot;
      err << "reduction graph written to " << opt.dot_path << "\n";
    }
    if (opt.compare) {
      CompareReport rep = compare_engines(lp, goal_text, opt);
      out << format_compare(rep);
      return rep.agree ? 0 : 1;
    }
    GoalRun r = run_goal(lp, goal_text, opt);
    for (const std::string& n : r.notes) err << n << "\n";
    return print_run(r, out);
  } catch (const FlpError& ex) {
    err << "error: " << ex.what() << "\n";
    return 2;
  }
}

}  // namespace flp
