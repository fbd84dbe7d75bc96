#pragma once

#include <stdexcept>
#include <string>

namespace polcav {

struct InvalidParams : std::runtime_error {
    explicit InvalidParams(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Steady-state system is numerically rank-deficient even after trace augmentation.
struct SolverSingular : std::runtime_error {
    explicit SolverSingular(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Requested polarization setting is perfectly dark; g2 is undefined there.
struct ZeroIntensity : std::runtime_error {
    explicit ZeroIntensity(const std::string& what) : std::runtime_error(what) {}
};

struct GridTooCoarse : std::runtime_error {
    explicit GridTooCoarse(const std::string& what) : std::runtime_error(what) {}
};

struct NotFound : std::runtime_error {
    explicit NotFound(const std::string& what) : std::runtime_error(what) {}
};

struct ForwardModelFailure : std::runtime_error {
    explicit ForwardModelFailure(const std::string& what) : std::runtime_error(what) {}
};

struct NonFinite : std::runtime_error {
    explicit NonFinite(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace polcav
