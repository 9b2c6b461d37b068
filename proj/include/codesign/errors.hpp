#pragma once

#include <stdexcept>
#include <string>

namespace codesign {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical model description is malformed (empty chain, nonpositive constants, bad shapes).
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Nonfinite or otherwise numerically unusable intermediate result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// FGM iterate became nonfinite.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonconvexProblemError : public DomainError {
 public:
  using DomainError::DomainError;
};

class FormatDerivationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The extreme barriers rejected every evaluated design.
class InfeasibleSpaceError : public Error {
 public:
  using Error::Error;
};

}  // namespace codesign
