#pragma once

#include <stdexcept>
#include <string>

namespace ssplmm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An input lies outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// A step size was requested that is not strictly positive.
struct NonPositiveStep : DomainError {
    using DomainError::DomainError;
};

/// The requested order cannot be attained with a positive SSP coefficient
/// for the given step-ratio history.
struct InfeasibleOrder : Error {
    using Error::Error;
};

struct EmptyHistory : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct EmptyTrajectory : Error {
    using Error::Error;
};

/// Negative density or pressure encountered in a gas-dynamics state.
struct NonPhysicalState : Error {
    using Error::Error;
};

struct NonFiniteState : Error {
    using Error::Error;
};

/// The starting procedure exhausted its retry budget.
struct StartupFailure : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace ssplmm
