#pragma once

#include <stdexcept>
#include <string>

namespace eqnet {

// Contract violations: bad shapes, bad arguments, inputs outside the
// documented domain.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// NaN/Inf showed up where only finite values are allowed.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// API used out of order (e.g. backward before forward).
struct StateError : std::logic_error {
    using std::logic_error::logic_error;
};

// Loss diverged; carries the iteration at which it happened.
struct TrainingError : std::runtime_error {
    explicit TrainingError(const std::string& what, std::size_t iteration)
        : std::runtime_error(what), iteration(iteration) {}
    std::size_t iteration;
};

struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace eqnet
