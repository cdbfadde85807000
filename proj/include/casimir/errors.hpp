// errors.hpp — exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a perturbative expansion hits a (near-)degenerate level,
// i.e. a resonance condition is active.
struct DegenerateLevelError : Error {
    explicit DegenerateLevelError(const std::string& what) : Error(what) {}
};

// Thrown when time integration violates trace / positivity monitors.
struct NumericalAbortError : Error {
    NumericalAbortError(const std::string& what, double last_good)
        : Error(what), last_good_time(last_good) {}
    double last_good_time{0.0};
};

// Configuration file problems (maps to CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace casimir
