#pragma once

#include <stdexcept>
#include <string>

namespace tomobell {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration (quadrature orders, grids, CLI options).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical estimate failed to converge under refinement.
class AccuracyError : public Error {
public:
    using Error::Error;
};

/// A truncated series did not meet its tail bound.
class ConvergenceError : public AccuracyError {
public:
    using AccuracyError::AccuracyError;
};

/// Probabilities or traces that should sum to one do not.
class NormalizationError : public AccuracyError {
public:
    using AccuracyError::AccuracyError;
};

/// Mismatched matrix or Fock-space dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Operation not defined for the given state variant.
class UnsupportedStateError : public Error {
public:
    using Error::Error;
};

/// Rejection sampling found a point where the tomogram exceeds M times the envelope.
class EnvelopeError : public Error {
public:
    EnvelopeError(const std::string& what, double x1, double x2)
        : Error(what), x1_(x1), x2_(x2) {}
    double x1() const { return x1_; }
    double x2() const { return x2_; }

private:
    double x1_;
    double x2_;
};

} // namespace tomobell
