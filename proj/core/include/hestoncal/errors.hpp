#pragma once

#include <stdexcept>
#include <string>

namespace hestoncal {

// Bad user input: parameters, files, configuration. The CLI maps these to
// exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failures while computing on otherwise valid input. CLI exit code 2.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IngestionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A value that must be strictly positive (variance, price ratio) was not.
class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularDesignError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateWeightsError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SimulationError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A file could not be read or written. CLI exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hestoncal
