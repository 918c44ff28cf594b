#pragma once

#include <stdexcept>
#include <string>

namespace tensorplan {

// Base for all library errors. Subclasses mirror the failure modes of the
// simulator protocol, the planner, and the environment constructors so that
// callers (and the CLI exit-code mapping) can tell validation problems apart
// from runtime failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input/validation failures: bad arguments, malformed configs, protocol misuse.
struct ValidationError : Error {
    using Error::Error;
};

// A StateId was used that the simulator never issued (violates local access).
struct UnknownStateError : ValidationError {
    using ValidationError::ValidationError;
};

struct StageOutOfRangeError : ValidationError {
    using ValidationError::ValidationError;
};

struct ActionOutOfRangeError : ValidationError {
    using ValidationError::ValidationError;
};

struct InvalidSampleCountError : ValidationError {
    using ValidationError::ValidationError;
};

struct DimensionMismatchError : ValidationError {
    using ValidationError::ValidationError;
};

struct NonPositiveArgumentError : ValidationError {
    using ValidationError::ValidationError;
};

struct OutOfRangeError : ValidationError {
    using ValidationError::ValidationError;
};

// GetAction called with a stage that does not follow the h=1,2,...,H order.
struct ProtocolViolationError : ValidationError {
    using ValidationError::ValidationError;
};

// Constraint list grew past the eluder budget; signals a soundness bug or a
// mis-sized tolerance rather than an expected outcome.
struct BudgetExceededError : Error {
    using Error::Error;
};

// Optimistic selection found no member of the hypothesis set.
struct InfeasibleWithinBudgetError : Error {
    using Error::Error;
};

struct NoConvergenceError : Error {
    using Error::Error;
};

// Environment construction cannot realize values with the requested norm bound.
struct InfeasibleScalingError : ValidationError {
    using ValidationError::ValidationError;
};

struct NormBudgetExceededError : Error {
    using Error::Error;
};

struct InvalidGoalError : ValidationError {
    using ValidationError::ValidationError;
};

struct NoGoalError : ValidationError {
    using ValidationError::ValidationError;
};

}  // namespace tensorplan
