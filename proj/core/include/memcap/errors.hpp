#pragma once

#include <stdexcept>
#include <string>

namespace memcap {

// Root of the library's error hierarchy. DomainError covers arguments outside
// the theory's validity range (caller mistakes); NumericError covers exhausted
// numerical budgets and decomposition failures (library-side trouble).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

// Capacity formula diverges at the requested parameter (lambda = 1).
struct DivergentCapacity : DomainError {
    using DomainError::DomainError;
};

// Qubit-capacity machinery requested where M_{lambda,mu} <= 1/2 and the
// capacity is identically zero.
struct ZeroCapacityRegion : DomainError {
    using DomainError::DomainError;
};

// Circulant band does not fit the matrix order (2N >= n).
struct BandTooWide : DomainError {
    using DomainError::DomainError;
};

// No finite number of channel uses reaches the requested rate.
struct UnreachableTarget : DomainError {
    using DomainError::DomainError;
};

struct NumericError : Error {
    using Error::Error;
};

// Coefficient tail still above tolerance at the configured index cap.
struct TruncationBudgetExceeded : NumericError {
    using NumericError::NumericError;
};

// SVD or eigensolver did not converge; indicates a numerics bug, not bad input.
struct ConvergenceFailure : NumericError {
    using NumericError::NumericError;
};

// Adaptive quadrature hit its refinement cap before meeting the tolerance.
struct QuadratureBudgetExceeded : NumericError {
    using NumericError::NumericError;
};

}  // namespace memcap
