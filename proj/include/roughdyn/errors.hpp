#pragma once

#include <stdexcept>
#include <string>

namespace roughdyn {

// Thrown when a sampler cannot produce an exact draw (e.g. non-PSD embedding).
struct SamplerError : std::runtime_error {
  explicit SamplerError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a trajectory exceeds the divergence guard.
struct DivergenceError : std::runtime_error {
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on malformed or contradictory experiment configuration.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on filesystem failures (missing input, refuse-to-overwrite, ...).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a request is structurally valid but outside supported modes.
struct UnsupportedError : std::runtime_error {
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace roughdyn
