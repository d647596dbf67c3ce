#pragma once

#include <array>

#include "nefem/flow_state.hpp"
#include "nefem/stabilization.hpp"

namespace nefem {

/// Boundary treatment per mesh tag.
enum class BcKind {
  InflowDirichlet,   // all components prescribed
  OutflowFree,       // nothing imposed
  Slip,              // normal momentum zero (wall-normal frame)
  NoSlipAdiabatic,   // both momenta zero, zero wall heat flux
};

struct BoundaryCondition {
  BcKind kind = BcKind::OutflowFree;
  std::array<bool, 4> mask{};   // prescribed components (Dirichlet side)
  State4<double> values{};      // g values for masked components
  State4<double> flux{};        // natural-side load h (usually zero)

  static BoundaryCondition inflow(const State4<double>& g) {
    return {BcKind::InflowDirichlet, {true, true, true, true}, g, {}};
  }
  static BoundaryCondition outflow() { return {}; }
  static BoundaryCondition slip() {
    return {BcKind::Slip, {false, false, false, false}, {}, {}};
  }
  static BoundaryCondition noslip() {
    return {BcKind::NoSlipAdiabatic, {false, true, true, false}, {}, {}};
  }
};

/// One space-time slab over a fixed spatial mesh: prisms with linear
/// bottom/top layers, solved with the previous slab's top trace entering
/// through the jump term.
struct SpaceTimeSlab {
  double t_begin = 0.0;
  double dt = 0.0;
  /// Previous top trace (physical nodal states, node-major, 4 per node);
  /// the initial condition for the first slab.
  const std::vector<double>* prev_top = nullptr;
};

/// Integral-term switches; production runs keep everything on. Tests use
/// them to isolate single terms of the weak form.
struct TermFlags {
  bool galerkin = true;          // temporal + advective Galerkin part
  bool viscous = true;
  bool supg = true;
  bool shock_capturing = true;
  bool jump = true;
  bool boundary_flux = true;     // natural-side loads
};

/// Two-point Gauss rule in time on the unit interval.
struct TimeRule {
  static constexpr int kPoints = 2;
  static constexpr std::array<double, 2> that = {
      0.5 - 0.28867513459481287, 0.5 + 0.28867513459481287};
  static constexpr std::array<double, 2> weight = {0.5, 0.5};
};

}  // namespace nefem
