#pragma once

#include <stdexcept>
#include <string>

namespace pdmpq {

/// Bad user-supplied configuration (unknown key, invalid value, missing input).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A grid file does not match the model or start point it is applied to.
struct GridMismatch : std::runtime_error {
  explicit GridMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// A point whose mode has no node in the codebook cannot be projected.
struct ModeNotRepresented : std::runtime_error {
  explicit ModeNotRepresented(const std::string& what) : std::runtime_error(what) {}
};

/// Root finding or quadrature failed to converge, or a quantity left its domain.
struct NumericFailure : std::runtime_error {
  explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pdmpq
