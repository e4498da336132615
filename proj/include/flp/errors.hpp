#pragma once

#include <stdexcept>
#include <string>

namespace flp {

// Base class for everything this library throws on purpose.
struct FlpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A contract violation inside the engine: an expression shape that the
// callee's precondition rules out (e.g. a let binding where a c-term is
// required). These indicate bugs in the caller, not bad user input.
struct MalformedError : FlpError {
  using FlpError::FlpError;
};

// Rejected program text: arity clashes, non-linear patterns, unknown
// symbols, rule shape violations.
struct LoadError : FlpError {
  using FlpError::FlpError;
};

struct ParseError : LoadError {
  ParseError(const std::string& msg, int line, int col)
      : LoadError(msg + " (line " + std::to_string(line) + ", column " +
                  std::to_string(col) + ")"),
        line(line),
        col(col) {}
  int line;
  int col;
};

// Program transformation failures (currently only hat-copy name clashes).
struct TransformError : FlpError {
  using FlpError::FlpError;
};

}  // namespace flp
