#pragma once

#include <stdexcept>
#include <string>

namespace presslab {

/// Base class for all presslab errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration or argument (CLI exit code 2).
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// A point or field lies outside the domain an operation is defined on.
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Linear solver failure; carries the residual it stalled at (CLI exit code 3).
struct SolverError : Error {
    SolverError(const std::string& what, double residual_)
        : Error(what + " (residual " + std::to_string(residual_) + ")"), residual(residual_) {}
    double residual;
};

} // namespace presslab
