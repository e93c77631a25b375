#pragma once

#include <stdexcept>
#include <string>

namespace btiso {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (dimension mismatch, non-uniform cover, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A desk-scale limit was exceeded (dimension, search budget, slice size).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Geometry is too degenerate for the requested operation.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// A computed object failed its own post-verification.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace btiso
