#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chanbound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument: dimension/length mismatch, Schatten p < 1, etc.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Matrix is not Hermitian within tolerance.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Matrix violates the density-matrix invariants (PSD, unit trace).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// A scalar map was undefined at one of the (clamped) eigenvalues.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// x is not majorized by y. Carries the first violated prefix length
/// (0 means the totals differ).
class MajorizationError : public Error {
 public:
  MajorizationError(const std::string& what, std::size_t prefix)
      : Error(what), prefix_(prefix) {}
  std::size_t violated_prefix() const noexcept { return prefix_; }

 private:
  std::size_t prefix_;
};

/// No closed form is known for this objective/class combination; use the
/// sampling oracle for an estimate instead.
class NotClosedFormError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace chanbound
