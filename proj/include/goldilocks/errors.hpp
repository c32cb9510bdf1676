#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace goldilocks {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched matrix/vector/batch dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Non-finite entries or out-of-range arguments.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// Objects combined in an inconsistent state (e.g. a trace produced by a
/// different network).
class InvalidStateError : public Error {
public:
    using Error::Error;
};

/// Bad configuration file or option set.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Training loss became non-finite. Carries the epoch where it happened.
class DivergenceError : public Error {
public:
    explicit DivergenceError(std::size_t epoch)
        : Error("training diverged at epoch " + std::to_string(epoch)), epoch(epoch) {}
    std::size_t epoch;
};

/// Rank-deficient weights where invertibility is required.
class NotInvertibleError : public Error {
public:
    using Error::Error;
};

/// Iterative solver exhausted its iteration budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Flow coefficients not square full-rank.
class SingularFlowError : public Error {
public:
    using Error::Error;
};

/// Function evaluated at a logarithmic (or similar) singularity.
class SingularPointError : public Error {
public:
    using Error::Error;
};

/// Operation defined only for Goldilocks activations.
class UnsupportedActivationError : public Error {
public:
    using Error::Error;
};

/// Operation defined only for 2-dimensional spaces.
class UnsupportedDimensionError : public Error {
public:
    using Error::Error;
};

/// Matrix factorization failed (e.g. covariance not positive semidefinite).
class DecompositionError : public Error {
public:
    using Error::Error;
};

}  // namespace goldilocks
