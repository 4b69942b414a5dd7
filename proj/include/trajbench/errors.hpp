#pragma once

#include <stdexcept>
#include <string>

namespace trajbench {

// A record in an annotation file could not be parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parsed data violates a domain invariant (non-finite coordinate, duplicate
// observation, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A run configuration is inconsistent or refers to unknown entities.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An array argument does not have the shape an operation expects.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A sequence is too short for the requested operation.
class InsufficientLengthError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A motion history is too short for the requested predictor.
class InsufficientHistoryError : public InsufficientLengthError {
 public:
  using InsufficientLengthError::InsufficientLengthError;
};

// A numeric computation produced non-finite values.
class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trajbench
