#pragma once

#include <functional>
#include <vector>

#include "nefem/classify.hpp"
#include "nefem/fluxes.hpp"
#include "nefem/slab_system.hpp"

namespace nefem {

/// Drag split normalized by the free-stream dynamic head and reference
/// length. The wall normal points out of the fluid, so the x force on
/// the body is the integral of (p n_x - (tau n)_x).
struct WallForces {
  double cd_pressure = 0.0;
  double cd_viscous = 0.0;
  double total() const { return cd_pressure + cd_viscous; }
};

struct WallSample {
  double arc = 0.0;  // degrees around the wall, or x/c
  double cp = 0.0;
  double p = 0.0;
  double cf = 0.0;  // tangential traction / dynamic head (viscous runs)
  int node = -1;
};

enum class WallCoordinate { ThetaDegrees, XOverC };

/// Wall drag from a physical nodal field (4 per node). Curved mode
/// integrates on the NURBS with exact normals; the straight-edge mode
/// uses the polygonal wall.
WallForces wall_forces(const CaseGeometry& geom, Mode mode,
                       const std::vector<double>& nodal, const FreeStream& fs,
                       const GasModel& gas);

/// One sample per wall node, ordered by arc position. Theta is measured
/// from the upstream (-x) direction about `center`, in [0, 360).
std::vector<WallSample> wall_samples(const CaseGeometry& geom, Mode mode,
                                     const std::vector<double>& nodal,
                                     const FreeStream& fs, const GasModel& gas,
                                     WallCoordinate coord, Vec2 center = {});

/// Newtonian wall stress components from conservation-variable point
/// values and gradients (grad[comp][dim]).
void viscous_stress(const State4<double>& u, const double grad[4][2],
                    const GasModel& gas, double& t11, double& t12,
                    double& t22);

/// Quadrature of an analytic vector field f(x, n) over the wall, using
/// the same curved/straight machinery as the force integrals.
Vec2 wall_vector_integral(const CaseGeometry& geom, Mode mode,
                          const std::function<Vec2(Vec2, Vec2)>& f,
                          int n_quad = 8);

}  // namespace nefem
