#pragma once

#include <stdexcept>
#include <string>

namespace pivotal {

/// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid input: bad probabilities, mismatched lengths, malformed specs.
/// The CLI maps these to exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

/// Numerical failure: 128-bit overflow, eigensolver non-convergence.
/// The CLI maps these to exit code 3.
struct NumericalError : Error {
    using Error::Error;
};

struct NonPositiveProbability : ValidationError {
    using ValidationError::ValidationError;
};

struct ProbabilityAboveOne : ValidationError {
    using ValidationError::ValidationError;
};

struct NonIntegerSampleSize : ValidationError {
    using ValidationError::ValidationError;
};

struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};

struct IndexOutOfRange : ValidationError {
    using ValidationError::ValidationError;
};

struct CountMismatch : ValidationError {
    using ValidationError::ValidationError;
};

struct RequiresSampleSizeTwo : ValidationError {
    using ValidationError::ValidationError;
};

struct RequiresClusterLayout : ValidationError {
    using ValidationError::ValidationError;
};

struct EnumerationTooLarge : ValidationError {
    using ValidationError::ValidationError;
};

struct ArithmeticOverflow : NumericalError {
    using NumericalError::NumericalError;
};

struct NoConvergence : NumericalError {
    using NumericalError::NumericalError;
};

struct ZeroProbabilityCluster : ValidationError {
    using ValidationError::ValidationError;
};

}  // namespace pivotal
