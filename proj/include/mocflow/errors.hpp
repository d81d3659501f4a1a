#pragma once

#include <stdexcept>
#include <string>

namespace mocflow {

/// Argument outside the mathematical domain of the requested function.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Value outside the attainable range (e.g. a time past total collapse).
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Iterative solver failed to converge. Unreachable for valid input.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation not defined for the given symmetry/interaction combination.
struct UnsupportedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A quantity that must be nonzero vanished (e.g. lambda in a void).
struct SingularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Density denominator crossed zero: the layer map is no longer single-valued.
struct ShockError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Explicit time step would exceed the advective stability bound.
struct CflError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive ODE step size underflowed away from a collapse event.
struct StepFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario configuration is malformed or out of documented ranges.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Profile total must be 1 for the quantum reconstruction pipeline.
struct NormalizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem failure while reading or writing artifacts.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mocflow
