#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cmvwalk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (|alpha| >= 1, |z| <= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Index or value outside a supported range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A state's light-cone frontier would leave the retained operator window.
class TruncationOverflow : public Error {
 public:
  using Error::Error;
};

/// Request exceeds the memory/time budget.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::int64_t feasible)
      : Error(what), feasible_(feasible) {}

  /// Largest feasible value of the parameter that caused the failure.
  std::int64_t feasible() const noexcept { return feasible_; }

 private:
  std::int64_t feasible_;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Malformed model description or command-line input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cmvwalk
