#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecmh {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter set failed validation, or a name is not registered.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Operands belong to different fields, curves or hash instances.
class ParameterMismatch : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// Batch inversion hit a zero element; `index()` names the first one.
class ZeroElementInBatch : public DivisionByZero {
 public:
  explicit ZeroElementInBatch(std::size_t index)
      : DivisionByZero("batch inversion: element " + std::to_string(index) + " is zero"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// x^2 + x = c has no solution (trace of c is 1).
class NoSolution : public Error {
 public:
  using Error::Error;
};

/// Byte or hex input does not decode to a valid value.
class InvalidEncoding : public Error {
 public:
  using Error::Error;
};

class InvalidUpdate : public Error {
 public:
  using Error::Error;
};

/// Requested computation is only supported at small (exhaustive) scale.
class Unsupported : public Error {
 public:
  using Error::Error;
};

class NotInvertible : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied component broke its documented contract.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed; indicates a bug or bad parameters.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ecmh
