#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nefem/classify.hpp"
#include "nefem/curve_io.hpp"
#include "nefem/mesh.hpp"
#include "test_support.hpp"

using namespace nefem;
using namespace nefem::test;

TEST_CASE("load_mesh: minimal single-triangle file") {
  const auto path = write_temp_file("tri.mesh",
                                    "nodes 3 triangles 1 bedges 3\n"
                                    "0 0\n1 0\n0 1\n"
                                    "0 1 2\n"
                                    "0 1 0\n1 2 0\n2 0 0\n");
  const Mesh mesh = load_mesh(path);
  CHECK(mesh.n_nodes() == 3);
  CHECK(mesh.n_triangles() == 1);
  CHECK(mesh.triangle_area(0) == doctest::Approx(0.5));
}

TEST_CASE("load_mesh: clockwise triangle is reoriented") {
  const auto path = write_temp_file("tri_cw.mesh",
                                    "nodes 3 triangles 1 bedges 3\n"
                                    "0 0\n1 0\n0 1\n"
                                    "0 2 1\n"  // clockwise
                                    "0 1 0\n1 2 0\n2 0 0\n");
  const Mesh mesh = load_mesh(path);
  CHECK(mesh.triangle_area(0) > 0.0);
  CHECK(mesh.triangle_area(0) == doctest::Approx(0.5));
}

TEST_CASE("load_mesh: parse errors carry the line number") {
  const auto path = write_temp_file("bad.mesh",
                                    "nodes 3 triangles 1 bedges 3\n"
                                    "0 0\n1 zebra\n0 1\n"
                                    "0 1 2\n"
                                    "0 1 0\n1 2 0\n2 0 0\n");
  try {
    load_mesh(path);
    FAIL("expected MeshError");
  } catch (const MeshError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
}

TEST_CASE("load_mesh: degenerate triangle rejected") {
  const auto path = write_temp_file("degen.mesh",
                                    "nodes 3 triangles 1 bedges 3\n"
                                    "0 0\n1 0\n2 0\n"
                                    "0 1 2\n"
                                    "0 1 0\n1 2 0\n2 0 0\n");
  CHECK_THROWS_AS(load_mesh(path), MeshError);
}

TEST_CASE("unit square: triangle areas sum to 1") {
  const Mesh mesh = make_unit_square(7);
  double area = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) area += mesh.triangle_area(t);
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("save/load round trip") {
  const Mesh mesh = make_unit_square(3);
  save_mesh(mesh, "/tmp/square.mesh");
  const Mesh back = load_mesh("/tmp/square.mesh");
  REQUIRE(back.n_nodes() == mesh.n_nodes());
  REQUIRE(back.n_triangles() == mesh.n_triangles());
  for (int i = 0; i < mesh.n_nodes(); ++i)
    CHECK((back.nodes[i] - mesh.nodes[i]).norm() == 0.0);
}

TEST_CASE("element_size: formula calibration") {
  // Unit right triangle, area 1/2: h = sqrt(2/sqrt(3)).
  const Mesh tri = make_single_triangle();
  CHECK(element_size(tri, 0) ==
        doctest::Approx(std::sqrt(2.0 / std::sqrt(3.0))).epsilon(1e-13));
  CHECK(element_size(tri, 0) == doctest::Approx(1.0746).epsilon(1e-4));

  // Equilateral with edge 1: h = 1.
  const double s3 = std::sqrt(3.0) / 2.0;
  const Mesh eq = make_single_triangle({0, 0}, {1, 0}, {0.5, s3});
  CHECK(element_size(eq, 0) == doctest::Approx(1.0).epsilon(1e-12));

  // Homogeneity: scaling the mesh by 2 doubles h.
  const Mesh big = make_single_triangle({0, 0}, {2, 0}, {1, 2 * s3});
  CHECK(element_size(big, 0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("classify: no wall tags, all standard") {
  const Mesh mesh = make_unit_square(2);
  const auto records = classify_elements(mesh, {}, {});
  CHECK(records.empty());
}

TEST_CASE("classify: straight degree-1 curve edge") {
  // Bottom edge of a single triangle lies on the segment (0,0)-(1,0),
  // parametrized left to right so the fluid (above) is on the left.
  const Mesh mesh = make_single_triangle();
  CurveSet curves;
  curves.emplace(7, NurbsCurve(KnotVector(1, {0, 0, 1, 1}),
                               {{0, 0}, {1, 0}}, {1, 1}));
  Mesh tagged = mesh;
  tagged.boundary_edges[0].tag = 1;  // bottom edge gets its own tag
  const auto records = classify_elements(tagged, curves, {{1, 7}});
  REQUIRE(records.size() == 1);
  CHECK(records[0].triangle == 0);
  CHECK(records[0].curved_edge == 0);
  CHECK(records[0].interior_node == 2);
  CHECK(records[0].xi1 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(records[0].xi2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classify: independent of boundary-edge ordering, idempotent") {
  const CurveSet curves = read_curves("data/cylinder.nurbs");
  Mesh mesh = load_mesh("data/cylinder_g0.mesh");
  const auto r1 = classify_elements(mesh, curves, {{0, 0}});
  const auto r2 = classify_elements(mesh, curves, {{0, 0}});
  REQUIRE(r1.size() == r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].triangle == r2[i].triangle);
    CHECK(r1[i].xi1 == r2[i].xi1);
    CHECK(r1[i].xi2 == r2[i].xi2);
  }
  std::reverse(mesh.boundary_edges.begin(), mesh.boundary_edges.end());
  const auto r3 = classify_elements(mesh, curves, {{0, 0}});
  REQUIRE(r3.size() == r1.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].triangle == r3[i].triangle);
    CHECK(r1[i].xi1 == r3[i].xi1);
  }
}

TEST_CASE("cylinder grid 0: 64 wall records on the exact circle") {
  const Mesh mesh = load_mesh("data/cylinder_g0.mesh");
  CHECK(mesh.n_triangles() == 6656);  // 6.72K-scale grid
  const CurveSet curves = read_curves("data/cylinder.nurbs");
  const auto records = classify_elements(mesh, curves, {{0, 0}});
  CHECK(records.size() == 64);

  int wall_edges = 0;
  for (const auto& be : mesh.boundary_edges)
    if (be.tag == 0) ++wall_edges;
  CHECK(wall_edges == 64);

  const NurbsCurve& circle = curves.at(0);
  const double tol = 1e-8 * mesh.diameter();
  for (const auto& rec : records) {
    CHECK(rec.xi1 < rec.xi2);
    const auto& tri = mesh.triangles[rec.triangle];
    const Vec2 a = mesh.nodes[tri[rec.curved_edge]];
    const Vec2 b = mesh.nodes[tri[(rec.curved_edge + 1) % 3]];
    CHECK((circle.evaluate(rec.xi1) - a).norm() <= tol);
    CHECK((circle.evaluate(rec.xi2) - b).norm() <= tol);
  }
}

TEST_CASE("classify: node off the curve fails the projection tolerance") {
  Mesh mesh = load_mesh("data/cylinder_g0.mesh");
  const CurveSet curves = read_curves("data/cylinder.nurbs");
  // Push one wall node off the circle by about 1e-3.
  const int node = mesh.boundary_edges[0].a;
  mesh.nodes[node] = mesh.nodes[node] * (1.0 + 2e-3);
  CHECK_THROWS_AS(classify_elements(mesh, curves, {{0, 0}}), MeshError);
}

TEST_CASE("classify: triangle with two wall edges is rejected") {
  // V-shaped degree-1 polyline; one triangle touches both legs.
  Mesh mesh;
  mesh.nodes = {{0.5, 0.0}, {1.0, 0.0}, {1.0, 0.5}};
  mesh.triangles.push_back({0, 1, 2});
  mesh.boundary_edges.push_back({0, 1, 5});
  mesh.boundary_edges.push_back({1, 2, 5});
  mesh.boundary_edges.push_back({2, 0, 6});
  validate_mesh(mesh);
  CurveSet curves;
  curves.emplace(0, NurbsCurve(KnotVector(1, {0, 0, 0.5, 1, 1}),
                               {{0, 0}, {1, 0}, {1, 1}}, {1, 1, 1}));
  CHECK_THROWS_WITH_AS(classify_elements(mesh, curves, {{5, 0}}),
                       doctest::Contains("two wall edges"), MeshError);
}

TEST_CASE("classify: seam-straddling element is rejected") {
  // Rotate every wall node of the coarse cylinder mesh by half an edge:
  // no node sits at the seam and the crossing edge must be flagged.
  const CurveSet curves = read_curves("data/cylinder.nurbs");
  Mesh mesh = load_mesh("data/cylinder_g0.mesh");
  const NurbsCurve& circle = curves.at(0);
  std::vector<int> wall_nodes;
  for (const auto& be : mesh.boundary_edges)
    if (be.tag == 0) wall_nodes.push_back(be.a);
  const double dphi = -0.5 * (2.0 * M_PI / 64.0);
  for (const int n : wall_nodes) {
    const Vec2 p = mesh.nodes[n];
    const double phi = std::atan2(p.y, p.x) + dphi;
    const double xi =
        circle.closest_point({0.5 * std::cos(phi), 0.5 * std::sin(phi)});
    mesh.nodes[n] = circle.evaluate(xi);
  }
  CHECK_THROWS_AS(classify_elements(mesh, curves, {{0, 0}}), MeshError);
}
