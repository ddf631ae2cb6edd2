#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinmech {

// Thrown when a field or gradient is requested inside the magnet's
// exclusion sphere. Carries the offending grid index when the evaluation
// came from a map scan (-1 otherwise).
class EvaluationInsideMagnet : public std::runtime_error {
public:
  explicit EvaluationInsideMagnet(const std::string& what, long grid_index = -1)
      : std::runtime_error(what), grid_index_(grid_index) {}
  long grid_index() const { return grid_index_; }

private:
  long grid_index_;
};

class GridSpecError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class StepTooLarge : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NonUniformSampling : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class DivisionByZeroCoupling : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Aggregates every violation found while validating a config, each
// prefixed with the key path that caused it.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "config validation failed:";
    for (const auto& s : v) out += "\n  " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

} // namespace spinmech
