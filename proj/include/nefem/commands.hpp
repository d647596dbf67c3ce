#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nefem {

/// Exit codes: 0 ok, 2 configuration/geometry error, 3 solver failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

int cmd_run(const std::string& config_path, std::ostream& out);
int cmd_check_mesh(const std::string& mesh_path, const std::string& curves_path,
                   std::ostream& out);
int cmd_sample_curve(const std::string& curves_path, int curve_id, int n,
                     std::ostream& out);
int cmd_study(const std::string& config_path,
              const std::vector<std::string>& grid_meshes, std::ostream& out);
int cmd_dump_quadrature(const std::string& config_path, std::ostream& out);

}  // namespace nefem
