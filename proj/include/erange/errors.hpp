#pragma once

#include <stdexcept>
#include <string>

namespace erange {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (r < 0, x <= 0, gamma <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition (sign of V, grid too short, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The analytic tail metadata needed to answer a question is missing.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

/// A fixed-point iteration failed to converge.
class IterationError : public Error {
 public:
  using Error::Error;
};

/// Two independent routes to the same quantity disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Zero-energy resonance (l = 0) or zero-energy bound state (l >= 1).
class ResonanceError : public Error {
 public:
  using Error::Error;
};

/// Floating-point failure (overflow that rescaling could not absorb, NaN).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace erange
