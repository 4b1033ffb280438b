#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace minins {

// Process exit codes used by the CLI.
enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,      // bad command line or scenario
  kData = 2,       // malformed trace or I/O failure
  kInternal = 3,   // simulator invariant violated
};

class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ExitCode code) : std::runtime_error(what), code_(code) {}
  ExitCode exit_code() const { return code_; }

 private:
  ExitCode code_;
};

class ScheduleError : public Error {
 public:
  explicit ScheduleError(const std::string& what) : Error(what, ExitCode::kInternal) {}
};

class TopologyError : public Error {
 public:
  explicit TopologyError(const std::string& what) : Error(what, ExitCode::kUsage) {}
};

class RoutingError : public Error {
 public:
  explicit RoutingError(const std::string& what) : Error(what, ExitCode::kUsage) {}
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what) : Error(what, ExitCode::kInternal) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what, ExitCode::kData) {}
};

/// A malformed line in a scenario or trace file; `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message, ExitCode code)
      : Error("line " + std::to_string(line) + ": " + message, code), line_(line), message_(message) {}
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

}  // namespace minins
