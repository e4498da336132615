#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flp/let.hpp"
#include "flp/pop.hpp"
#include "flp/susp.hpp"
#include "flp/syntax.hpp"
#include "flp/term.hpp"

namespace flp {

enum class EngineKind { Pop, Let, Susp };

std::string engine_name(EngineKind k);
std::optional<EngineKind> engine_from_name(const std::string& s);

// A ready-to-run program: user rules first, then the prelude, desugared.
struct LoadedProgram {
  Program program;
};

LoadedProgram load_base();  // prelude only
// User text plus the prelude. Adding rules to a prelude function would
// silently change its meaning, so that is a LoadError rather than a merge.
LoadedProgram load_text(const std::string& text);
LoadedProgram load_file(const std::string& path);

struct RunOptions {
  EngineKind engine = EngineKind::Susp;
  SearchBounds bounds;  // pop and let
  SolveLimits limits;   // susp
  bool memoize = true;  // let: alpha-normal memoization on duplicate states
  bool force_rrt = false;  // evaluate the goal as rrt(goal)
  bool trace = false;
  bool compare = false;
  std::string dot_path;  // nonempty: also write the bounded reduction graph
};

struct GoalRun {
  std::vector<ExprPtr> answers;  // engine order; susp keeps multiplicity
  bool complete = true;
  std::string trace_text;          // set when trace was requested and applies
  std::vector<std::string> notes;  // informational, for the error stream
};

// Parses the goal against lp's symbols (ground expressions only), desugars
// rt/rrt (extending the program with hat copies when rrt occurs), and runs
// the selected engine. pop answers are the total values only; partial
// values stay internal to the calculus.
GoalRun run_goal(const LoadedProgram& lp, const std::string& goal_text, const RunOptions& opt);

// Derivation/trace first, one answer per line, then a trailer line:
// "no more answers." or "search bound reached.". Returns 0 when at least
// one answer was printed, 1 otherwise.
int print_run(const GoalRun& r, std::ostream& out);

struct EngineReport {
  EngineKind engine;
  std::vector<ExprPtr> values;  // total values, deduplicated, size-ordered
  bool complete = true;
};

struct CompareReport {
  std::vector<EngineReport> engines;  // pop, let, susp
  bool agree = true;
  ExprPtr witness;  // minimal value not shared by all engines; null if agree
};

CompareReport compare_engines(const LoadedProgram& lp, const std::string& goal_text,
                              const RunOptions& opt);
std::string format_compare(const CompareReport& r);

// Bounded reduction graph of the pop or let calculus in dot format.
// The susp engine has no small-step graph; asking for one is a LoadError.
std::string reduction_graph_dot(const LoadedProgram& lp, const std::string& goal_text,
                                const RunOptions& opt);

// Complete file-runner pipeline: load (prelude only when path is empty),
// optionally write the dot graph, then evaluate or compare. Answers go to
// out, diagnostics and notes to err. Exit status: 0 with at least one
// answer (or compare PASS), 1 with none (or DIFF), 2 on diagnostics.
int run_file(const std::string& path, const std::string& goal_text, const RunOptions& opt,
             std::ostream& out, std::ostream& err);

}  // namespace flp
