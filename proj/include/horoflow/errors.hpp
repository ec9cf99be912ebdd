#pragma once

#include <stdexcept>
#include <string>

namespace horoflow {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or out-of-range run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure (step underflow, blow-up, non-finite values).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// ODE integration failed; carries the last accepted state.
class IntegrationError : public NumericalError {
public:
    IntegrationError(const std::string& what, double sigma, double s, double z, double alpha)
        : NumericalError(what), sigma(sigma), s(s), z(z), alpha(alpha) {}
    double sigma, s, z, alpha;
};

/// A branch tail that has not reached its asymptotic regime yet.
class AsymptoteError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace horoflow
