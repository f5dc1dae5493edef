#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace stablelab {

// Error taxonomy used across the library. Exceptions carry enough context
// for the CLI to map them onto exit codes.

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct CapabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SequencingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested tolerance could not be met within the node budget.
/// Carries the error bound that was actually achieved.
struct AccuracyError : std::runtime_error {
    double achieved;
    AccuracyError(const std::string& what, double achieved_bound)
        : std::runtime_error(what), achieved(achieved_bound) {}
};

/// No admissible distribution exists for the requested parameters.
struct ConstructionError : std::runtime_error {
    std::string constraint;
    ConstructionError(const std::string& what, std::string violated)
        : std::runtime_error(what), constraint(std::move(violated)) {}
};

struct ExtrapolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numeric value together with a machine-checked absolute error bound.
struct Certified {
    double value = 0.0;
    double error_bound = 0.0;

    Certified() = default;
    Certified(double v, double e) : value(v), error_bound(e) {}

    Certified operator+(const Certified& o) const {
        return {value + o.value, error_bound + o.error_bound};
    }
    Certified operator-(const Certified& o) const {
        return {value - o.value, error_bound + o.error_bound};
    }
    Certified scaled(double c) const { return {c * value, std::abs(c) * error_bound}; }
};

inline bool nearly_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace stablelab
