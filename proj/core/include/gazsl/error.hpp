#pragma once

#include <stdexcept>
#include <string>

namespace gazsl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user configuration: unreadable files, invalid option values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a documented invariant (shapes, splits, file contents).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes are incompatible with a primitive.
class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A loss, gradient, or parameter became NaN or infinite.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gazsl
