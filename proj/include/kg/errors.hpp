#pragma once

#include <stdexcept>
#include <string>

namespace kg {

/// Argument outside the mathematical domain of an operation, or a violated
/// precondition. Maps to CLI exit status 1.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid configuration document; the message names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-convergence, overflow, NaN/Inf, divergence.
/// Maps to CLI exit status 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace kg
