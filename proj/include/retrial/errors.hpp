#pragma once

#include <stdexcept>
#include <string>

namespace retrial {

// Malformed value objects: distributions that do not sum to one, coordinates
// out of range, wrong dimensions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent setup: unsolvable scenario, mismatched component schemas,
// bad method flags.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Misuse of an API contract (e.g. stepping a terminal state).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// File reading problems. Carries a 1-based line number when one is known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Optimization diverged; carries the gradient step at which it happened.
class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& msg, int step)
      : std::runtime_error(msg + " (step " + std::to_string(step) + ")"), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace retrial
