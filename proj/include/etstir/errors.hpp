#pragma once

#include <stdexcept>
#include <string>

namespace etstir {

struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ResolutionError : std::runtime_error {
    explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Linear or nonlinear iteration failed to reach tolerance within its cap.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg, double residual = 0.0)
        : std::runtime_error(msg), final_residual(residual) {}
    double final_residual;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace etstir
