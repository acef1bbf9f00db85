#pragma once

#include <stdexcept>
#include <string>

namespace longbond {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or configuration value violates its invariant.
/// Carries the offending field name for CLI diagnostics.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// An exponent evaluation point lies outside the driver's moment domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Bond maturity precedes the valuation time.
class InvalidHorizon : public Error {
public:
    using Error::Error;
};

/// A time pair violates the required ordering (e.g. s > t).
class OrderingError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature failed to meet tolerance within its subdivision budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// No admissible Lp witness exponent exists within the searchable bracket.
class WitnessNotFound : public Error {
public:
    using Error::Error;
};

/// Requested simulation scheme is incompatible with the model's driver.
class SchemeMismatch : public Error {
public:
    using Error::Error;
};

/// A simulated state left the representable range; carries the step index.
class NumericalBlowup : public Error {
public:
    NumericalBlowup(const std::string& message, long step)
        : Error(message + " at step " + std::to_string(step)), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

} // namespace longbond
