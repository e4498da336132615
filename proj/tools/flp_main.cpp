#include <algorithm>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "flp/driver.hpp"
#include "flp/repl.hpp"

int main(int argc, char** argv) {
  CLI::App app{"workbench for a small functional logic language with local run-time choice"};

  std::string file;
  std::string goal;
  std::string engine = "susp";
  std::string dot;
  bool rrt = false;
  bool trace = false;
  bool compare = false;
  bool no_memo = false;

  flp::RunOptions opt;
  long long max_steps = opt.bounds.max_steps;
  long long max_states = static_cast<long long>(opt.bounds.max_states);
  long long max_answers = static_cast<long long>(opt.limits.max_answers);
  long long max_depth = opt.limits.max_depth;

  app.add_option("file", file, "program file (prelude only when omitted)");
  app.add_option("-e,--eval", goal, "goal expression; omit it for the interactive shell");
  app.add_option("--engine", engine, "evaluation engine")
      ->check(CLI::IsMember({"pop", "let", "susp"}));
  app.add_flag("--rrt", rrt, "evaluate the goal under run-time choice, as rrt(goal)");
  app.add_option("--max-steps", max_steps, "depth bound for the calculus engines");
  app.add_option("--max-states", max_states, "state bound for the calculus engines");
  app.add_option("--max-answers", max_answers, "answer bound for the susp engine");
  app.add_option("--max-depth", max_depth, "per-branch rule bound for the susp engine");
  app.add_flag("--trace", trace, "print a derivation (let) or branch traces (susp)");
  app.add_flag("--compare", compare, "run all three engines and diff their value sets");
  app.add_flag("--no-memo", no_memo, "let engine: re-expand duplicate states");
  app.add_option("--dot", dot, "write the bounded reduction graph to this file (pop/let)");

  CLI11_PARSE(app, argc, argv);

  opt.engine = *flp::engine_from_name(engine);
  opt.bounds.max_steps = static_cast<int>(std::max(0LL, max_steps));
  opt.bounds.max_states = static_cast<size_t>(std::max(0LL, max_states));
  opt.limits.max_answers = static_cast<size_t>(std::max(0LL, max_answers));
  opt.limits.max_depth = static_cast<int>(std::max(0LL, max_depth));
  opt.force_rrt = rrt;
  opt.trace = trace;
  opt.compare = compare;
  opt.memoize = !no_memo;
  opt.dot_path = dot;

  if (goal.empty()) {
    flp::run_repl(std::cin, std::cout, std::cerr, opt, file);
    return 0;
  }
  return flp::run_file(file, goal, opt, std::cout, std::cerr);
}
