#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace oscfar {

// Precondition violations (bad indices, non-positive parameters, malformed
// cells). The CLI maps these to usage errors.
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
    InvalidArgument(std::string field, const std::string& what)
        : std::invalid_argument(what), field_(std::move(field)) {}

    // Name of the offending parameter ("N", "tau", "alpha", ...) when known.
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Numerical failures of an otherwise valid request.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raw closed-form value fell outside [-1e-9, 1 + 1e-9].
class CancellationError : public ComputationError {
public:
    CancellationError(const std::string& what, double raw, double condition)
        : ComputationError(what), raw_value(raw), condition_estimate(condition) {}

    double raw_value;
    double condition_estimate;
};

class InfeasibleTarget : public ComputationError {
public:
    InfeasibleTarget(const std::string& what, double max_pfa)
        : ComputationError(what), attainable_max(max_pfa) {}

    double attainable_max;
};

class UnbracketableTarget : public ComputationError {
public:
    UnbracketableTarget(const std::string& what, double cap)
        : ComputationError(what), tau_cap(cap) {}

    double tau_cap;
};

class NonMonotoneError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class ConvergenceError : public ComputationError {
public:
    ConvergenceError(const std::string& what, double estimate, double error)
        : ComputationError(what), best_estimate(estimate), achieved_error(error) {}

    double best_estimate;
    double achieved_error;
};

}  // namespace oscfar
