#pragma once

#include <stdexcept>
#include <string>

namespace esk {

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                           std::to_string(column)),
        line(line),
        column(column) {}
};

struct UnboundSignal : std::runtime_error {
  std::string signal;
  explicit UnboundSignal(const std::string& s)
      : std::runtime_error("unbound signal: " + s), signal(s) {}
};

struct InstantaneousLoop : std::runtime_error {
  InstantaneousLoop() : std::runtime_error("loop body terminates instantly") {}
};

/// A broken internal invariant, reported with CLI exit code 2.
struct InternalError : std::runtime_error {
  explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace esk
