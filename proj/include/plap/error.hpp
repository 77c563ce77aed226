#pragma once

#include <stdexcept>
#include <string>

namespace plap {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quotient was requested where its denominator vanishes.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, double location, int index = 0)
      : Error(what), location_(location), index_(index) {}
  double location() const noexcept { return location_; }
  int index() const noexcept { return index_; }

 private:
  double location_;
  int index_;
};

/// Integrator or iteration failed to reach its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue bracket expansion ran out of budget.
class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Eigenfunction has the wrong number of interior zeros for its index.
class IndexMismatchError : public Error {
 public:
  IndexMismatchError(const std::string& what, int expected_zeros, int found_zeros)
      : Error(what), expected_(expected_zeros), found_(found_zeros) {}
  int expected_zeros() const noexcept { return expected_; }
  int found_zeros() const noexcept { return found_; }

 private:
  int expected_;
  int found_;
};

/// Caller broke a documented precondition on the shape of the inputs.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Two computations that must agree do not.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// A finite search exhausted its grid without a witness.
class SearchFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace plap
