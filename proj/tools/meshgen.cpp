// O-grid generators for the two benchmark geometries. Meshes are written
// once and shipped with the repository; the solver never generates them.
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nefem/curve_io.hpp"
#include "nefem/mesh.hpp"

namespace {

using namespace nefem;

constexpr int kTagWall = 0;
constexpr int kTagInflow = 1;
constexpr int kTagOutflow = 2;

struct OGridSpec {
  std::vector<Vec2> surface;        // closed loop, N nodes on the curve
  std::vector<Vec2> outer;          // matching N nodes on the far boundary
  int rings = 0;
  double beta = 3.3;                // radial clustering strength
  double outflow_half_angle = 50.0; // degrees around +x on the outer loop
  Vec2 outflow_center{};            // angle reference
};

Mesh build_ogrid(const OGridSpec& spec) {
  const int n = static_cast<int>(spec.surface.size());
  const int rings = spec.rings;
  Mesh mesh;
  mesh.nodes.reserve(static_cast<std::size_t>(n) * (rings + 1));

  auto blend = [&](int j) {
    const double eta = static_cast<double>(j) / rings;
    return (std::exp(spec.beta * eta) - 1.0) / (std::exp(spec.beta) - 1.0);
  };
  for (int j = 0; j <= rings; ++j) {
    const double w = blend(j);
    for (int k = 0; k < n; ++k)
      mesh.nodes.push_back(spec.surface[k] +
                           (spec.outer[k] - spec.surface[k]) * w);
  }
  auto id = [&](int j, int k) { return j * n + ((k % n) + n) % n; };

  for (int j = 0; j < rings; ++j) {
    for (int k = 0; k < n; ++k) {
      const int a = id(j, k), b = id(j, k + 1);
      const int c = id(j + 1, k + 1), d = id(j + 1, k);
      if ((j + k) % 2 == 0) {
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, d});
      } else {
        mesh.triangles.push_back({a, b, d});
        mesh.triangles.push_back({b, c, d});
      }
    }
  }
  for (int k = 0; k < n; ++k)
    mesh.boundary_edges.push_back({id(0, k), id(0, k + 1), kTagWall});
  const double half = spec.outflow_half_angle * M_PI / 180.0;
  for (int k = 0; k < n; ++k) {
    const Vec2 mid =
        0.5 * (mesh.nodes[id(rings, k)] + mesh.nodes[id(rings, k + 1)]) -
        spec.outflow_center;
    const double ang = std::abs(std::atan2(mid.y, mid.x));
    const int tag = ang <= half ? kTagOutflow : kTagInflow;
    mesh.boundary_edges.push_back({id(rings, k + 1), id(rings, k), tag});
  }
  validate_mesh(mesh);
  return mesh;
}

int make_cylinder(int wall_edges, int rings, double outer_radius, double beta,
                  double outflow_half_angle, const std::string& mesh_path,
                  const std::string& curves_path) {
  const double radius = 0.5;
  const NurbsCurve circle = make_circle({0, 0}, radius, /*clockwise=*/true);

  OGridSpec spec;
  spec.rings = rings;
  spec.beta = beta;
  spec.outflow_half_angle = outflow_half_angle;
  for (int k = 0; k < wall_edges; ++k) {
    const double phi = -2.0 * M_PI * k / wall_edges;  // clockwise, seam at +x
    const Vec2 target{radius * std::cos(phi), radius * std::sin(phi)};
    const double xi = circle.closest_point(target);
    spec.surface.push_back(circle.evaluate(xi));
    spec.outer.push_back(
        {outer_radius * std::cos(phi), outer_radius * std::sin(phi)});
  }
  const Mesh mesh = build_ogrid(spec);
  save_mesh(mesh, mesh_path);
  if (!curves_path.empty()) {
    CurveSet set;
    set.emplace(0, circle);
    write_curves(set, curves_path);
  }
  std::cout << mesh_path << ": " << mesh.n_nodes() << " nodes, "
            << mesh.n_triangles() << " triangles, " << wall_edges
            << " wall edges\n";
  return 0;
}

int make_naca(int wall_edges, int rings, double outer_radius, double beta,
              double outflow_half_angle, int n_ctrl, int samples_per_side,
              double clustering, const std::string& mesh_path,
              const std::string& curves_path) {
  const FitResult fit =
      fit_profile(naca0012_samples(samples_per_side), 4, n_ctrl);
  std::cout << "profile fit: " << n_ctrl
            << " control points, max deviation " << fit.max_deviation << "\n";
  const NurbsCurve& curve = fit.curve;
  const Vec2 center{0.5, 0.0};

  OGridSpec spec;
  spec.rings = rings;
  spec.beta = beta;
  spec.outflow_half_angle = outflow_half_angle;
  spec.outflow_center = center;
  for (int k = 0; k < wall_edges; ++k) {
    const double u = static_cast<double>(k) / wall_edges;
    // Arc-length clustering toward the trailing (u = 0,1) and leading
    // (u = 0.5) edges.
    const double xi =
        u - clustering * std::sin(4.0 * M_PI * u) / (4.0 * M_PI);
    const Vec2 s = curve.evaluate(xi);
    spec.surface.push_back(s);
    // Radial rays through the (star-shaped) profile cannot cross.
    const double alpha = std::atan2(s.y - center.y, s.x - center.x);
    spec.outer.push_back(center + Vec2{outer_radius * std::cos(alpha),
                                       outer_radius * std::sin(alpha)});
  }
  const Mesh mesh = build_ogrid(spec);
  save_mesh(mesh, mesh_path);
  if (!curves_path.empty()) {
    CurveSet set;
    set.emplace(0, curve);
    write_curves(set, curves_path);
  }
  std::cout << mesh_path << ": " << mesh.n_nodes() << " nodes, "
            << mesh.n_triangles() << " triangles, " << wall_edges
            << " wall edges\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark mesh generator (tag 0 wall, 1 inflow, 2 outflow)"};
  app.require_subcommand(1);

  int wall_edges = 64, rings = 52, n_ctrl = 200, samples = 400;
  double outer_radius = 20.0, beta = 3.3, outflow_half_angle = 50.0;
  double clustering = 0.6;
  std::string mesh_path = "mesh.txt", curves_path;

  auto* cyl = app.add_subcommand("cylinder", "O-grid around a circle of "
                                             "diameter 1");
  cyl->add_option("--wall-edges", wall_edges);
  cyl->add_option("--rings", rings);
  cyl->add_option("--outer-radius", outer_radius);
  cyl->add_option("--beta", beta);
  cyl->add_option("--outflow-half-angle", outflow_half_angle);
  cyl->add_option("--out", mesh_path)->required();
  cyl->add_option("--curves", curves_path);

  auto* naca = app.add_subcommand("naca", "O-grid around a fitted NACA0012");
  naca->add_option("--wall-edges", wall_edges);
  naca->add_option("--rings", rings);
  naca->add_option("--outer-radius", outer_radius);
  naca->add_option("--beta", beta);
  naca->add_option("--outflow-half-angle", outflow_half_angle);
  naca->add_option("--nctrl", n_ctrl);
  naca->add_option("--samples", samples);
  naca->add_option("--clustering", clustering);
  naca->add_option("--out", mesh_path)->required();
  naca->add_option("--curves", curves_path);

  CLI11_PARSE(app, argc, argv);
  try {
    if (cyl->parsed())
      return make_cylinder(wall_edges, rings, outer_radius, beta,
                           outflow_half_angle, mesh_path, curves_path);
    if (naca->parsed())
      return make_naca(wall_edges, rings, outer_radius, beta,
                       outflow_half_angle, n_ctrl, samples, clustering,
                       mesh_path, curves_path);
  } catch (const nefem::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
