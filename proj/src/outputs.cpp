#include "nefem/outputs.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace nefem {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void ensure_directory(const std::string& path) {
  if (!path.empty()) std::filesystem::create_directories(path);
}

void write_vtk_fields(const std::string& path, const CaseGeometry& geom,
                      const std::vector<double>& nodal, const FreeStream& fs,
                      const GasModel& gas) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  const Mesh& mesh = geom.mesh;
  os << "# vtk DataFile Version 3.0\n";
  os << "compressible flow fields\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.n_nodes() << " double\n";
  for (const Vec2& p : mesh.nodes)
    os << fmt(p.x) << " " << fmt(p.y) << " 0\n";
  os << "CELLS " << mesh.n_triangles() << " " << 4 * mesh.n_triangles() << "\n";
  for (const auto& t : mesh.triangles)
    os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  os << "CELL_TYPES " << mesh.n_triangles() << "\n";
  for (int t = 0; t < mesh.n_triangles(); ++t) os << "5\n";

  os << "POINT_DATA " << mesh.n_nodes() << "\n";
  auto state_at = [&](int i) {
    return ConservationState{nodal[i * 4], nodal[i * 4 + 1], nodal[i * 4 + 2],
                             nodal[i * 4 + 3]};
  };
  os << "SCALARS rho double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < mesh.n_nodes(); ++i) os << fmt(nodal[i * 4]) << "\n";
  os << "SCALARS p double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < mesh.n_nodes(); ++i)
    os << fmt(pressure(state_at(i), gas)) << "\n";
  os << "SCALARS mach double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < mesh.n_nodes(); ++i)
    os << fmt(mach_number(state_at(i), gas)) << "\n";
  os << "SCALARS cp double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < mesh.n_nodes(); ++i)
    os << fmt(pressure_coefficient(pressure(state_at(i), gas), fs, gas))
       << "\n";
  os << "VECTORS velocity double\n";
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    const auto u = state_at(i);
    os << fmt(u.mx / u.rho) << " " << fmt(u.my / u.rho) << " 0\n";
  }
}

void write_wall_csv(const std::string& path,
                    const std::vector<WallSample>& samples, bool viscous) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  os << (viscous ? "arc,cp,p,cf\n" : "arc,cp,p\n");
  for (const WallSample& s : samples) {
    os << fmt(s.arc) << "," << fmt(s.cp) << "," << fmt(s.p);
    if (viscous) os << "," << fmt(s.cf);
    os << "\n";
  }
}

void write_force_history_csv(const std::string& path,
                             const std::vector<SlabRecord>& history) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  os << "slab,time,cd_pressure,cd_viscous\n";
  for (const SlabRecord& r : history) {
    os << r.slab << "," << fmt(r.t_end) << "," << fmt(r.cd_pressure) << ","
       << fmt(r.cd_viscous) << "\n";
  }
}

void write_summary_json(const std::string& path, const RunState& rs,
                        const WallForces& final_forces, Mode mode) {
  nlohmann::ordered_json j;
  j["mode"] = mode == Mode::Nefem ? "nefem" : "sfem";
  j["slabs"] = rs.slabs_completed;
  j["time"] = rs.time;
  j["steady"] = rs.steady;
  j["failed"] = rs.failed;
  if (rs.failed) j["failure"] = rs.failure;
  j["newton_total"] = rs.total_newton;
  j["krylov_total"] = rs.total_krylov;
  j["cd"] = final_forces.total();
  j["cd_pressure"] = final_forces.cd_pressure;
  j["cd_viscous"] = final_forces.cd_viscous;
  if (!rs.history.empty()) {
    j["final_residual"] = rs.history.back().r_final;
    j["final_steady_delta"] = rs.history.back().steady_delta;
  }
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  os << j.dump(2) << "\n";
}

}  // namespace nefem
