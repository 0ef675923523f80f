#pragma once

#include <stdexcept>
#include <string>

namespace fracgibc {

/// Invalid inputs: bad curve parameters, coefficient bounds violated, malformed files.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical invariant failed at run time (solver breakdown, coercivity
/// violation, convergence budget exceeded).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration file error, carries the 1-based line number when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace fracgibc
