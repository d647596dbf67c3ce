#pragma once

#include "nefem/config.hpp"

namespace nefem {

/// Everything a solver run needs, built from a config: loaded geometry,
/// classified wall elements, gas model with derived viscosity, and the
/// per-tag boundary conditions.
struct CaseSetup {
  CaseConfig config;
  CaseGeometry geometry;
  CompressibleLaw law;
  FreeStream fs;
  std::map<int, BoundaryCondition> bcs;
};

/// `mesh_override` and `mode_override` support grid studies that reuse
/// one config across meshes and both element treatments.
CaseSetup build_case(const CaseConfig& cfg,
                     const std::string& mesh_override = "",
                     const Mode* mode_override = nullptr);

}  // namespace nefem
