// errors.hpp: exception types raised by the engine

#pragma once

#include <stdexcept>
#include <string>

namespace triq {

// Parameter outside the domain of a physical formula (e.g. a zero transition
// frequency, negative temperature).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An operation was requested in a dissipation mode where it is undefined
// (crossing terms without the crossing condition, etc.).
class ModeError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// The steady-state null space does not have the expected dimension.
class DegenerateNullSpace : public std::runtime_error {
public:
    DegenerateNullSpace(const std::string& what, int dimension)
        : std::runtime_error(what), dimension_(dimension) {}
    int dimension() const noexcept { return dimension_; }

private:
    int dimension_;
};

// Fixed-step integration drifted beyond the trace tolerance.
class StepInstability : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateDenominator : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Run configuration could not be parsed or violates an invariant.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace triq
