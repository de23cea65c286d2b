#pragma once

#include <stdexcept>
#include <string>

namespace cylflow {

/// Invalid configuration or parameters (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure during a run, e.g. non-finite velocities (CLI exit code 3).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem / serialization failure (CLI exit code 4).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Kernel evaluated at a singular configuration (coincident points with zero core).
struct SingularInputError : NumericalError {
    explicit SingularInputError(const std::string& msg) : NumericalError(msg) {}
};

} // namespace cylflow
