#pragma once

#include <stdexcept>
#include <string>

namespace sdgar {

// Usage/configuration mistakes the caller can fix before any work runs.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input data (carries the offending line in the message).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weights that do not define a probability distribution.
struct InvalidDistributionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChecksumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values encountered mid-computation.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Contract violations (empty sample sets and the like).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace sdgar
