#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace primerace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error taxonomy. Configuration mistakes (bad parameters, inadmissible
// requests) and data problems (malformed or insufficient inputs) map to
// distinct CLI exit codes, so they stay distinct types here.

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class OrderError : public DataError {
 public:
  using DataError::DataError;
};

class MissingCharacter : public DataError {
 public:
  using DataError::DataError;
};

class ZeroCountMismatch : public DataError {
 public:
  using DataError::DataError;
};

class NotPositiveDefinite : public DataError {
 public:
  using DataError::DataError;
};

class InsufficientPrimes : public DataError {
 public:
  using DataError::DataError;
};

class Inadmissible : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DimensionTooLarge : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// One named hypothesis check: `value` against `bound` (direction depends on
// the check; `ok` is authoritative). Violations are surfaced, never fatal,
// unless the caller asked for strict mode.
struct HypothesisCheck {
  std::string name;
  bool ok = true;
  double value = 0.0;
  double bound = 0.0;
};

}  // namespace primerace
