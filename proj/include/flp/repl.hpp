#pragma once

#include <iosfwd>
#include <string>

#include "flp/driver.hpp"

namespace flp {

// Interactive loop. Lines starting with ':' are commands (:load FILE,
// :engine pop|let|susp, :trace on|off, :bounds key=N..., :quit); anything
// else is parsed as a goal and evaluated with the current options. Returns
// on :quit or end of input. A nonempty preload path is loaded up front.
void run_repl(std::istream& in, std::ostream& out, std::ostream& err, RunOptions opt,
              const std::string& preload = "");

}  // namespace flp
