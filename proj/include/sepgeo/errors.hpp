#pragma once

#include <stdexcept>
#include <string>

namespace sepgeo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong dimension, non-hermitian data, out-of-range parameter.
class InvalidInput : public Error {
public:
  using Error::Error;
};

class InvalidDimension : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

class DimensionMismatch : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

class SingularMatrix : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

class NotStrictlyPositive : public InvalidInput {
public:
  NotStrictlyPositive(const std::string& what, double min_eigenvalue)
      : InvalidInput(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
  double min_eigenvalue_;
};

class FailsPrecondition : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

/// An iterative method did not reach its stopping criterion.
class NonConvergence : public Error {
public:
  NonConvergence(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

}  // namespace sepgeo
