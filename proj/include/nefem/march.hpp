#pragma once

#include <functional>
#include <ostream>

#include "nefem/newton.hpp"
#include "nefem/wall_forces.hpp"

namespace nefem {

struct SlabRecord {
  int slab = 0;
  double t_end = 0.0;
  double dt = 0.0;
  int newton_iters = 0;
  int krylov_iters = 0;
  double r0 = 0.0;
  double r_final = 0.0;
  double cd_pressure = 0.0;
  double cd_viscous = 0.0;
  double steady_delta = 0.0;
};

struct RunState {
  std::vector<double> top;  // physical nodal states, 4 per node
  double time = 0.0;
  int slabs_completed = 0;
  bool steady = false;
  bool failed = false;
  std::string failure;
  long total_newton = 0;
  long total_krylov = 0;
  std::vector<SlabRecord> history;

  /// Drag averaged over the final fifth of the history; weakly unsteady
  /// wakes settle into a small limit cycle, and the window mean is the
  /// number grid studies compare.
  WallForces settled_drag() const;
};

using SlabCallback = std::function<void(const RunState&, const SlabRecord&)>;

/// Sequential slab marching from a uniform free-stream initial state:
/// build slab, Newton-solve, record wall quantities, advance. Stops at
/// the steady tolerance or the slab budget; a failed slab is retried
/// with halved dt before giving up (state preserved in the returned
/// RunState, failed = true).
RunState march(const SlabSystem& sys, const CompressibleLaw& law,
               const FreeStream& fs, const SolverConfig& cfg,
               std::ostream* log = nullptr, const SlabCallback& on_slab = {});

}  // namespace nefem
