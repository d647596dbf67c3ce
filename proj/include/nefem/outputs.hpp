#pragma once

#include <string>
#include <vector>

#include "nefem/march.hpp"

namespace nefem {

/// Legacy ASCII VTK with point data rho, p, M, Cp and the velocity
/// vector. Deterministic byte-for-byte for a given field.
void write_vtk_fields(const std::string& path, const CaseGeometry& geom,
                      const std::vector<double>& nodal, const FreeStream& fs,
                      const GasModel& gas);

void write_wall_csv(const std::string& path,
                    const std::vector<WallSample>& samples, bool viscous);

void write_force_history_csv(const std::string& path,
                             const std::vector<SlabRecord>& history);

/// Small JSON run summary (final drag, slab count, Newton totals, ...).
void write_summary_json(const std::string& path, const RunState& rs,
                        const WallForces& final_forces, Mode mode);

/// Creates the directory (and parents) if needed.
void ensure_directory(const std::string& path);

}  // namespace nefem
