#include "flp/repl.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "flp/errors.hpp"

namespace flp {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> ws;
  std::string w;
  while (is >> w) ws.push_back(w);
  return ws;
}

void show_bounds(const RunOptions& opt, std::ostream& out) {
  out << "bounds: steps=" << opt.bounds.max_steps << " states=" << opt.bounds.max_states
      << " answers=" << opt.limits.max_answers << " depth=" << opt.limits.max_depth << "\n";
}

// ":bounds steps=40 answers=10" — unknown keys or junk numbers report usage.
bool set_bounds(RunOptions& opt, const std::vector<std::string>& ws) {
  for (size_t i = 1; i < ws.size(); ++i) {
    size_t eq = ws[i].find('=');
    if (eq == std::string::npos) return false;
    std::string key = ws[i].substr(0, eq);
    long long v;
    try {
      v = std::stoll(ws[i].substr(eq + 1));
    } catch (const std::exception&) {
      return false;
    }
    if (v < 0) return false;
    if (key == "steps")
      opt.bounds.max_steps = static_cast<int>(v);
    else if (key == "states")
      opt.bounds.max_states = static_cast<size_t>(v);
    else if (key == "answers")
      opt.limits.max_answers = static_cast<size_t>(v);
    else if (key == "depth")
      opt.limits.max_depth = static_cast<int>(v);
    else
      return false;
  }
  return true;
}

}  // namespace

void run_repl(std::istream& in, std::ostream& out, std::ostream& err, RunOptions opt,
              const std::string& preload) {
  out << "interactive shell; :quit leaves, :load FILE loads a program.\n";
  LoadedProgram lp = load_base();
  if (!preload.empty()) {
    try {
      lp = load_file(preload);
      out << "loaded " << preload << " (" << lp.program.rules.size() << " rules with prelude)\n";
    } catch (const FlpError& ex) {
      err << "error: " << ex.what() << "\n";
    }
  }
  std::string line;
  for (;;) {
    out << "flp> " << std::flush;
    if (!std::getline(in, line)) break;
    std::string t = trim(line);
    if (t.empty()) continue;

    if (t[0] == ':') {
      std::vector<std::string> ws = words(t);
      const std::string& cmd = ws[0];
      if (cmd == ":quit" || cmd == ":q") break;
      try {
        if (cmd == ":load") {
          if (ws.size() != 2) {
            err << "usage: :load FILE\n";
            continue;
          }
          lp = load_file(ws[1]);
          out << "loaded " << ws[1] << " (" << lp.program.rules.size()
              << " rules with prelude)\n";
        } else if (cmd == ":engine") {
          std::optional<EngineKind> k;
          if (ws.size() == 2) k = engine_from_name(ws[1]);
          if (k) {
            opt.engine = *k;
            out << "engine: " << ws[1] << "\n";
          } else {
            err << "usage: :engine pop|let|susp\n";
          }
        } else if (cmd == ":trace") {
          if (ws.size() == 2 && (ws[1] == "on" || ws[1] == "off"))
            opt.trace = ws[1] == "on";
          else
            err << "usage: :trace on|off\n";
        } else if (cmd == ":bounds") {
          if (set_bounds(opt, ws))
            show_bounds(opt, out);
          else
            err << "usage: :bounds steps=N states=N answers=N depth=N\n";
        } else {
          err << "unknown command: " << cmd << "\n";
        }
      } catch (const FlpError& ex) {
        err << "error: " << ex.what() << "\n";
      }
      continue;
    }

    try {
      GoalRun r = run_goal(lp, t, opt);
      for (const std::string& n : r.notes) err << n << "\n";
      print_run(r, out);
    } catch (const FlpError& ex) {
      err << "error: " << ex.what() << "\n";
    }
  }
}

}  // namespace flp
