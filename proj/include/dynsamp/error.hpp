#pragma once

#include <stdexcept>
#include <string>

namespace dynsamp {

/// Base of all library errors. The category decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments, shape mismatches, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Rank deficiency, complex roots where real ones are required, degenerate data.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// File missing, unreadable or malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dynsamp
