#pragma once

#include <stdexcept>
#include <string>

namespace nefem {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad curve data, failed projection, zero tangent, tangled mapping.
struct GeometryError : Error {
  using Error::Error;
};

/// Mesh file or topology problems (parse errors carry a line number).
struct MeshError : Error {
  using Error::Error;
};

/// Invalid case configuration (missing files, bad keys, BC conflicts).
struct ConfigError : Error {
  using Error::Error;
};

/// Thermodynamically invalid state (nonpositive density or pressure).
/// Recoverable inside Newton via step halving.
struct StateError : Error {
  using Error::Error;
};

/// Nonlinear or linear solver failure.
struct SolverError : Error {
  using Error::Error;
};

}  // namespace nefem
