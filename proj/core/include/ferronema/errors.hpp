#pragma once

#include <stdexcept>
#include <string>

namespace ferronema {

/// Base of every error thrown by the library. The CLI maps the concrete
/// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: bad scalings, malformed configuration, violated
/// preconditions.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Invalid particle geometry (a < b, b <= 0, overlapping particles,
/// a quadrature that does not belong to the spheroid it is used with).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A point passed to an exterior-only formula lies inside or on a particle,
/// or a logarithm/division leaves its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Far-field formulas evaluated too close to the source.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Grid or mesh too coarse for the requested geometry.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Random ensemble generation ran out of retries.
class PackingError : public Error {
 public:
  using Error::Error;
};

/// Generic numerical failure (non-convergence, loss of coercivity,
/// runaway energy).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The local quadratic form of a cell problem is not positive definite.
class CoercivityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ferronema
