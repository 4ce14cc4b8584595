#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tlsmp {

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failures. The CLI maps every subclass to exit status 2.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankDeficientError : NumericalError {
    RankDeficientError(std::size_t column, const std::string& what)
        : NumericalError(what), column(column) {}
    std::size_t column;
};

struct CholeskyBreakdown : NumericalError {
    CholeskyBreakdown(std::size_t pivot, double value, const std::string& what)
        : NumericalError(what), pivot(pivot), value(value) {}
    std::size_t pivot;
    double value;
};

struct SingularMatrixError : NumericalError {
    using NumericalError::NumericalError;
};

struct ConvergenceError : NumericalError {
    using NumericalError::NumericalError;
};

struct NonUniqueSolutionError : NumericalError {
    using NumericalError::NumericalError;
};

struct NongenericProblemError : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace tlsmp
