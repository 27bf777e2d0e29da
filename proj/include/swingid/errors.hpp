#pragma once

#include <stdexcept>
#include <string>

namespace swingid {

// Malformed or missing configuration keys / files.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// File and CSV schema problems.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad numeric inputs (non-finite samples, non-positive masses, ...).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Integrator step underflow or non-finite state during simulation.
struct SimulationError : std::runtime_error {
  explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Identification could not produce a usable result (e.g. no restart converged).
struct IdentError : std::runtime_error {
  explicit IdentError(const std::string& msg) : std::runtime_error(msg) {}
};

// Signal analysis failures (trace does not settle, zero input power, ...).
struct AnalysisError : std::runtime_error {
  explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace swingid
