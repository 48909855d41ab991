#pragma once

#include <stdexcept>
#include <string>

namespace shufreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of the supplied matrices or index sets disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// X^T X + lambda I could not be factorized; the caller must regularize.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Malformed user data: non-finite entries, bad CSV cells, invalid seeds.
class DataError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine exhausted its iteration budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace shufreg
