#include "nefem/case_setup.hpp"

namespace nefem {

CaseSetup build_case(const CaseConfig& cfg, const std::string& mesh_override,
                     const Mode* mode_override) {
  CaseSetup cs;
  cs.config = cfg;
  if (!mesh_override.empty()) cs.config.mesh_path = mesh_override;
  if (mode_override) cs.config.mode = *mode_override;

  Mesh mesh = load_mesh(cs.config.mesh_path);

  std::map<int, int> wall_map;
  for (const auto& [tag, spec] : cfg.boundaries)
    if (spec.curve >= 0) wall_map[tag] = spec.curve;

  CurveSet curves;
  if (!wall_map.empty()) {
    if (cfg.curves_path.empty())
      throw ConfigError(cfg.path +
                        ": boundary tags reference curves but no 'curves' "
                        "file is configured");
    curves = read_curves(cfg.curves_path);
  } else if (!cfg.curves_path.empty()) {
    curves = read_curves(cfg.curves_path);
  }

  cs.geometry = CaseGeometry::build(std::move(mesh), std::move(curves),
                                    std::move(wall_map));
  cs.law = CompressibleLaw{cfg.gas};
  cs.fs = cfg.freestream;

  const State4<double> g = cs.fs.state().as_array();
  for (const auto& [tag, spec] : cfg.boundaries) {
    switch (spec.kind) {
      case BcKind::InflowDirichlet:
        cs.bcs[tag] = BoundaryCondition::inflow(g);
        break;
      case BcKind::OutflowFree:
        cs.bcs[tag] = BoundaryCondition::outflow();
        break;
      case BcKind::Slip:
        cs.bcs[tag] = BoundaryCondition::slip();
        break;
      case BcKind::NoSlipAdiabatic:
        cs.bcs[tag] = BoundaryCondition::noslip();
        break;
    }
  }
  // Tags present in the mesh but absent from the config are an error the
  // assembler reports; tags in the config but not the mesh are harmless.
  return cs;
}

}  // namespace nefem
