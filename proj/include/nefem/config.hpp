#pragma once

#include <map>
#include <string>

#include "nefem/newton.hpp"
#include "nefem/wall_forces.hpp"

namespace nefem {

/// Case description parsed from the flat key-value config format
/// ("section.key = value", '#' comments). See docs/formats.md.
struct CaseConfig {
  std::string path;  // where it was loaded from

  std::string mesh_path;
  std::string curves_path;  // optional when no tag references a curve
  Mode mode = Mode::Nefem;

  struct BoundarySpec {
    BcKind kind = BcKind::OutflowFree;
    int curve = -1;  // NURBS id for wall tags
  };
  std::map<int, BoundarySpec> boundaries;

  FreeStream freestream;
  GasModel gas;
  double reynolds = 0.0;  // when set, mu = rho*|u|*lref/Re

  SolverConfig solver;

  std::string output_dir = "out";
  int output_cadence = 10;
  WallCoordinate wall_coord = WallCoordinate::ThetaDegrees;
  Vec2 wall_center{};
};

CaseConfig load_config(const std::string& path);

}  // namespace nefem
