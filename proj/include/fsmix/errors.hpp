#pragma once

#include <stdexcept>
#include <string>

namespace fsmix {

// Every failure surfaced by the library derives from Error so callers can
// catch the family or a specific kind.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class LabelRangeError : public Error {
 public:
  using Error::Error;
};

/// Non-symmetric, non-positive-definite or otherwise unusable matrix input.
class MatrixError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Operation not valid for the current state (e.g. stream longer than horizon).
class StateError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied oracle broke its stated contract (e.g. gradient norm above G).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace fsmix
