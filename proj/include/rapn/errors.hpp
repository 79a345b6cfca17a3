#pragma once

#include <stdexcept>
#include <string>

namespace rapn {

// Base class for everything this library throws on bad input or misuse.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed textual input (net files, QDIMACS, marking specs).
struct ParseError : Error {
  int line;
  ParseError(int line_, const std::string& msg)
      : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
  explicit ParseError(const std::string& msg) : Error(msg), line(0) {}
};

// An operation was called on an object that does not meet its structural
// requirements (wrong objective, cyclic net where acyclic is required, ...).
struct PreconditionError : Error {
  using Error::Error;
};

// A firing was attempted while the transition is not enabled.
struct NotEnabledError : Error {
  int transition;
  int blocking_place;
  NotEnabledError(const std::string& msg, int t, int p)
      : Error(msg), transition(t), blocking_place(p) {}
};

// A zero test failed: the tested place was non-empty.
struct ZeroTestError : Error {
  int transition;
  int tested_place;
  ZeroTestError(const std::string& msg, int t, int p)
      : Error(msg), transition(t), tested_place(p) {}
};

// Replay failed at a specific step of a firing sequence. The message counts
// steps from 1, the index field from 0.
struct StepError : Error {
  size_t index;
  StepError(size_t i, const std::string& cause)
      : Error("step " + std::to_string(i + 1) + ": " + cause), index(i) {}
};

// A claimed witness does not do what a witness must do.
struct WitnessError : Error {
  using Error::Error;
};

}  // namespace rapn
