#pragma once

#include <stdexcept>
#include <string>

namespace cavcool {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A physical configuration does not map onto a trapped harmonic model.
class InvalidRegime : public Error {
public:
  using Error::Error;
};

/// The moment system has an eigenvalue with non-negative real part.
class UnstableSystem : public Error {
public:
  using Error::Error;
};

/// A closed-form expression hit a vanishing denominator.
class DegenerateDenominator : public Error {
public:
  using Error::Error;
};

/// The affine fixed-point problem has no solution.
class SingularSystem : public Error {
public:
  using Error::Error;
};

/// The adaptive integrator could not meet the requested tolerances.
class StepSizeUnderflow : public Error {
public:
  using Error::Error;
};

/// Fock-space truncation no longer holds (edge population too large).
class TruncationBreach : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent scenario/config input.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace cavcool
