#pragma once

#include <stdexcept>
#include <string>

namespace wwtm {

/// Base class for all domain errors raised by the toolkit.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad mesh input: non-positive sizes, self-intersecting polygons,
/// profiles outside (0, H], missing symmetry planes.
struct InvalidGeometryError : Error {
    using Error::Error;
};

/// Plate sizes not consistent with A_i = eps * a_i * N_i.
struct InconsistentScalingError : Error {
    using Error::Error;
};

/// Element with (near) zero measure encountered during assembly.
struct DegenerateElementError : Error {
    using Error::Error;
};

/// Constraint reduction removed every degree of freedom.
struct EmptySystemError : Error {
    using Error::Error;
};

/// Requested more eigenpairs than the mass form can support.
struct InsufficientRankError : Error {
    using Error::Error;
};

/// Eigenvalue iteration did not reach the requested residual.
struct ConvergenceError : Error {
    double attained_residual;
    ConvergenceError(const std::string& msg, double attained)
        : Error(msg), attained_residual(attained) {}
};

/// Inputs that disagree with each other (mesh mismatch, bad eps, ...).
struct InconsistencyError : Error {
    using Error::Error;
};

/// Node or work budget exceeded.
struct BudgetError : Error {
    using Error::Error;
};

/// Configuration file problems (missing fields, bad values).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace wwtm
