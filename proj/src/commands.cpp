#include "nefem/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "nefem/case_setup.hpp"
#include "nefem/mapping.hpp"
#include "nefem/outputs.hpp"

namespace nefem {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct RunResult {
  RunState state;
  WallForces forces;
  std::vector<WallSample> samples;
};

RunResult execute_case(const CaseSetup& cs, std::ostream& log,
                       bool write_outputs) {
  set_global_threads(resolve_thread_count(cs.config.solver.threads));
  SlabSystem sys(cs.geometry, cs.config.mode, cs.bcs,
                 cs.config.solver.quadrature);

  const std::string dir = cs.config.output_dir;
  if (write_outputs) ensure_directory(dir);

  const int cadence = std::max(1, cs.config.output_cadence);
  auto on_slab = [&](const RunState& rs, const SlabRecord& rec) {
    if (write_outputs && (rec.slab + 1) % cadence == 0) {
      char name[64];
      std::snprintf(name, sizeof name, "/fields_%05d.vtk", rec.slab + 1);
      write_vtk_fields(dir + name, cs.geometry, rs.top, cs.fs, cs.law.gas);
    }
  };

  RunResult rr;
  rr.state = march(sys, cs.law, cs.fs, cs.config.solver, &log,
                   write_outputs ? on_slab : SlabCallback{});
  rr.forces =
      wall_forces(cs.geometry, cs.config.mode, rr.state.top, cs.fs, cs.law.gas);
  rr.samples = wall_samples(cs.geometry, cs.config.mode, rr.state.top, cs.fs,
                            cs.law.gas, cs.config.wall_coord,
                            cs.config.wall_center);
  if (write_outputs) {
    write_vtk_fields(dir + "/fields_final.vtk", cs.geometry, rr.state.top,
                     cs.fs, cs.law.gas);
    write_wall_csv(dir + "/wall.csv", rr.samples, !cs.law.gas.inviscid);
    write_force_history_csv(dir + "/forces.csv", rr.state.history);
    write_summary_json(dir + "/summary.json", rr.state, rr.forces,
                       cs.config.mode);
  }
  return rr;
}

}  // namespace

int cmd_run(const std::string& config_path, std::ostream& out) {
  CaseSetup cs;
  try {
    cs = build_case(load_config(config_path));
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  RunResult rr;
  try {
    rr = execute_case(cs, out, true);
  } catch (const Error& e) {
    out << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
  if (rr.state.failed) {
    out << "solver failure: " << rr.state.failure << "\n";
    out << "state dump written to " << cs.config.output_dir << "\n";
    return kExitSolver;
  }
  out << "completed " << rr.state.slabs_completed << " slabs, t = "
      << fmt(rr.state.time) << (rr.state.steady ? " (steady)" : "") << "\n";
  out << "C_D = " << fmt(rr.forces.total()) << " (pressure "
      << fmt(rr.forces.cd_pressure) << ", viscous " << fmt(rr.forces.cd_viscous)
      << ")\n";
  return kExitOk;
}

int cmd_check_mesh(const std::string& mesh_path, const std::string& curves_path,
                   std::ostream& out) {
  try {
    Mesh mesh = load_mesh(mesh_path);
    CurveSet curves;
    if (!curves_path.empty()) curves = read_curves(curves_path);

    // Detect which boundary tags lie on which curve.
    std::map<int, std::vector<int>> tag_nodes;
    for (const auto& be : mesh.boundary_edges) {
      tag_nodes[be.tag].push_back(be.a);
      tag_nodes[be.tag].push_back(be.b);
    }
    const double tol = 1e-6 * mesh.diameter();
    std::map<int, int> wall_map;
    for (const auto& [tag, nodes] : tag_nodes) {
      for (const auto& [cid, curve] : curves) {
        bool all_on = true;
        for (const int n : nodes) {
          try {
            const double xi = curve.closest_point(mesh.nodes[n]);
            if ((curve.evaluate(xi) - mesh.nodes[n]).norm() > tol) {
              all_on = false;
              break;
            }
          } catch (const GeometryError&) {
            all_on = false;
            break;
          }
        }
        if (all_on) {
          wall_map[tag] = cid;
          break;
        }
      }
    }

    out << "nodes " << mesh.n_nodes() << " triangles " << mesh.n_triangles()
        << " bedges " << mesh.boundary_edges.size() << "\n";
    for (const auto& [tag, nodes] : tag_nodes) {
      out << "tag " << tag << ": " << nodes.size() / 2 << " edges";
      if (wall_map.count(tag)) out << " (on curve " << wall_map[tag] << ")";
      out << "\n";
    }

    CaseGeometry geom =
        CaseGeometry::build(std::move(mesh), std::move(curves), wall_map);
    out << "nefem records: " << geom.records.size() << "\n";

    double max_proj = 0.0;
    double min_det = std::numeric_limits<double>::max();
    const QuadratureRule rule = nefem_quadrature(5);
    for (const auto& rec : geom.records) {
      const NurbsCurve& curve = geom.curves.at(rec.curve_id);
      const auto& tri = geom.mesh.triangles[rec.triangle];
      const Vec2 a = geom.mesh.nodes[tri[rec.curved_edge]];
      const Vec2 b = geom.mesh.nodes[tri[(rec.curved_edge + 1) % 3]];
      max_proj = std::max(max_proj, (curve.evaluate(rec.xi1) - a).norm());
      max_proj = std::max(max_proj, (curve.evaluate(rec.xi2) - b).norm());
      const TrtElement trt(rec, curve, geom.mesh);
      for (int q = 0; q < rule.size(); ++q)
        min_det = std::min(min_det, trt.map_with_jacobian(rule.points[q]).det);
    }
    if (!geom.records.empty()) {
      out << "max wall-node projection distance: " << fmt(max_proj) << "\n";
      out << "min NEFEM Jacobian determinant: " << fmt(min_det) << "\n";
    }
    out << "ok\n";
    return kExitOk;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_sample_curve(const std::string& curves_path, int curve_id, int n,
                     std::ostream& out) {
  try {
    const CurveSet curves = read_curves(curves_path);
    const auto it = curves.find(curve_id);
    if (it == curves.end())
      throw GeometryError("no curve with id " + std::to_string(curve_id));
    out << "xi,x,y,nx,ny\n";
    for (int k = 0; k <= n; ++k) {
      const double xi = static_cast<double>(k) / n;
      const Vec2 p = it->second.evaluate(xi);
      const Vec2 nv = it->second.outward_normal(xi);
      out << fmt(xi) << "," << fmt(p.x) << "," << fmt(p.y) << "," << fmt(nv.x)
          << "," << fmt(nv.y) << "\n";
    }
    return kExitOk;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_study(const std::string& config_path,
              const std::vector<std::string>& grid_meshes, std::ostream& out) {
  CaseConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  ensure_directory(cfg.output_dir);
  const std::string csv_path = cfg.output_dir + "/study.csv";

  struct Row {
    int grid;
    std::string mesh;
    int n_en;
    Mode mode;
    double cd;
    bool steady;
  };
  std::vector<Row> rows;
  auto save = [&](bool aborted) {
    // Errors are relative to the finest grid of the same mode.
    std::ofstream os(csv_path);
    os << "grid,mesh,n_en,mode,cd,rel_err,steady\n";
    for (const Row& r : rows) {
      double ref = r.cd;  // finest completed grid of the same mode
      for (auto it = rows.rbegin(); it != rows.rend(); ++it)
        if (it->mode == r.mode) {
          ref = it->cd;
          break;
        }
      const double err = std::abs(r.cd - ref) / std::max(std::abs(ref), 1e-300);
      os << r.grid << "," << r.mesh << "," << r.n_en << ","
         << (r.mode == Mode::Nefem ? "nefem" : "sfem") << "," << fmt(r.cd)
         << "," << fmt(err) << "," << (r.steady ? 1 : 0) << "\n";
    }
    if (aborted) os << "# aborted: partial results\n";
  };

  for (int g = 0; g < static_cast<int>(grid_meshes.size()); ++g) {
    for (const Mode mode : {Mode::Nefem, Mode::Sfem}) {
      out << "== grid " << g << " (" << grid_meshes[g] << ") mode "
          << (mode == Mode::Nefem ? "nefem" : "sfem") << "\n";
      try {
        const CaseSetup cs = build_case(cfg, grid_meshes[g], &mode);
        const RunResult rr = execute_case(cs, out, false);
        if (rr.state.failed) throw SolverError(rr.state.failure);
        rows.push_back({g, grid_meshes[g], cs.geometry.mesh.n_triangles(),
                        mode, rr.forces.total(), rr.state.steady});
        out << "   C_D = " << fmt(rr.forces.total()) << " after "
            << rr.state.slabs_completed << " slabs\n";
      } catch (const Error& e) {
        out << "error on grid " << g << ": " << e.what() << "\n";
        save(true);
        return kExitSolver;
      }
    }
  }
  save(false);
  out << "study written to " << csv_path << "\n";
  return kExitOk;
}

int cmd_dump_quadrature(const std::string& config_path, std::ostream& out) {
  try {
    const CaseSetup cs = build_case(load_config(config_path));
    ensure_directory(cs.config.output_dir);
    const std::string path = cs.config.output_dir + "/quadrature.csv";
    std::ofstream os(path);
    os << "element,class,x,y,weight\n";
    const QuadratureRule std_rule =
        standard_quadrature(cs.config.solver.quadrature.standard_order);
    const QuadratureRule nef_rule =
        nefem_quadrature(cs.config.solver.quadrature.nefem_points);
    const Mesh& mesh = cs.geometry.mesh;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      const int rec_idx = cs.config.mode == Mode::Nefem
                              ? cs.geometry.record_of_triangle[t]
                              : -1;
      if (rec_idx >= 0) {
        const auto& rec = cs.geometry.records[rec_idx];
        const TrtElement trt(rec, cs.geometry.curves.at(rec.curve_id), mesh);
        for (int q = 0; q < nef_rule.size(); ++q) {
          const MappedPoint mp = trt.map_with_jacobian(nef_rule.points[q]);
          os << t << ",nefem," << fmt(mp.x.x) << "," << fmt(mp.x.y) << ","
             << fmt(nef_rule.weights[q] * mp.det) << "\n";
        }
      } else {
        const auto& tri = mesh.triangles[t];
        const AffineTriangle at{
            {mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]}};
        const double det = at.jacobian().det();
        for (int q = 0; q < std_rule.size(); ++q) {
          const Vec2 x = at.map(std_rule.points[q]);
          os << t << ",standard," << fmt(x.x) << "," << fmt(x.y) << ","
             << fmt(std_rule.weights[q] * det) << "\n";
        }
      }
    }
    out << "quadrature dump written to " << path << "\n";
    return kExitOk;
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace nefem
