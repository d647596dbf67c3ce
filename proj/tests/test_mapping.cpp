#include <doctest.h>

#include <cmath>
#include <random>

#include "nefem/classify.hpp"
#include "nefem/curve_io.hpp"
#include "nefem/mapping.hpp"
#include "nefem/mesh.hpp"
#include "nefem/quadrature.hpp"
#include "test_support.hpp"

using namespace nefem;
using namespace nefem::test;

namespace {

// Factorial-based oracle for monomials over the reference triangle:
// int s^a r^b ds dr = a! b! / (a+b+2)!.
double monomial_integral(int a, int b) {
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return fact(a) * fact(b) / fact(a + b + 2);
}

double integrate(const QuadratureRule& rule, int a, int b) {
  double s = 0.0;
  for (int q = 0; q < rule.size(); ++q)
    s += rule.weights[q] * std::pow(rule.points[q].s, a) *
         std::pow(rule.points[q].r, b);
  return s;
}

// One wall element of the coarse cylinder mesh, with its curve.
struct CircleElement {
  Mesh mesh;
  CurveSet curves;
  NefemElementRecord rec;
};

CircleElement cylinder_element(int which = 3) {
  CircleElement ce;
  ce.mesh = load_mesh("data/cylinder_g0.mesh");
  ce.curves = read_curves("data/cylinder.nurbs");
  const auto records = classify_elements(ce.mesh, ce.curves, {{0, 0}});
  ce.rec = records[which];
  return ce;
}

// Straight-edge record over the reference-style triangle.
struct StraightElement {
  Mesh mesh;
  CurveSet curves;
  NefemElementRecord rec;
};

StraightElement straight_element() {
  StraightElement se;
  se.mesh = make_single_triangle({0.1, -0.2}, {1.3, 0.05}, {0.4, 1.1});
  se.curves.emplace(0, NurbsCurve(KnotVector(1, {0, 0, 1, 1}),
                                  {{0.1, -0.2}, {1.3, 0.05}}, {1, 1}));
  se.rec.triangle = 0;
  se.rec.curved_edge = 0;
  se.rec.curve_id = 0;
  se.rec.xi1 = 0.0;
  se.rec.xi2 = 1.0;
  se.rec.interior_node = 2;
  return se;
}

}  // namespace

TEST_CASE("shape functions: vertices, curved edge, partition of unity") {
  auto L = shape_functions({0, 0});
  CHECK(L[0] == 0.0);
  CHECK(L[1] == 0.0);
  CHECK(L[2] == 1.0);
  L = shape_functions({0.5, 0.5});
  CHECK(L[0] == 0.5);
  CHECK(L[1] == 0.5);
  CHECK(L[2] == 0.0);  // interior function vanishes on the curved edge

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    double s = u(rng), r = u(rng) * (1.0 - s);
    L = shape_functions({s, r});
    CHECK(L[0] + L[1] + L[2] == doctest::Approx(1.0).epsilon(1e-15));
  }
  // |L3(s, 1-s)| = 0 identically along the curved edge.
  for (int k = 0; k <= 20; ++k) {
    const double s = k / 20.0;
    CHECK(shape_functions({s, 1.0 - s})[2] == 0.0);
  }
}

TEST_CASE("standard quadrature: exactness and positivity") {
  for (int order = 1; order <= 5; ++order) {
    const QuadratureRule rule = standard_quadrature(order);
    double wsum = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a + 0 <= order; ++a)
      for (int b = 0; a + b <= order; ++b)
        CHECK(integrate(rule, a, b) ==
              doctest::Approx(monomial_integral(a, b)).epsilon(1e-13));
  }
  CHECK(integrate(standard_quadrature(1), 0, 0) == doctest::Approx(0.5));
  CHECK_THROWS(standard_quadrature(6));
  CHECK_THROWS(standard_quadrature(0));
}

TEST_CASE("collapsed quadrature: measure, clearance of the singular vertex") {
  for (int n : {2, 3, 5, 8}) {
    const QuadratureRule rule = nefem_quadrature(n);
    CHECK(rule.size() == n * n);
    double wsum = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-13));
    for (const auto& p : rule.points) {
      CHECK(p.s + p.r > 1e-12);  // no point at the collapsed vertex
      CHECK(p.s >= 0.0);
      CHECK(p.r >= 0.0);
      CHECK(p.s + p.r < 1.0);
    }
  }
  CHECK_THROWS(nefem_quadrature(1));
}

TEST_CASE("trt_map: vertices and straight-edge affine reduction") {
  const auto ce = cylinder_element();
  const NurbsCurve& circle = ce.curves.at(0);
  const TrtElement trt(ce.rec, circle, ce.mesh);
  CHECK((trt.map({0, 0}) - trt.interior_node()).norm() == 0.0);
  CHECK((trt.map({1, 0}) - circle.evaluate(ce.rec.xi1)).norm() < 1e-15);
  CHECK((trt.map({0, 1}) - circle.evaluate(ce.rec.xi2)).norm() < 1e-15);

  // Straight degree-1 edge: equals the affine P1 map at random points.
  const auto se = straight_element();
  const TrtElement strt(se.rec, se.curves.at(0), se.mesh);
  const AffineTriangle aff{{se.mesh.nodes[0], se.mesh.nodes[1],
                            se.mesh.nodes[2]}};
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    double s = u(rng), r = u(rng) * (1.0 - s);
    CHECK((strt.map({s, r}) - aff.map({s, r})).norm() < 1e-13);
  }
}

TEST_CASE("trt_jacobian: affine constant, finite differences, positivity") {
  const auto se = straight_element();
  const TrtElement strt(se.rec, se.curves.at(0), se.mesh);
  const AffineTriangle aff{{se.mesh.nodes[0], se.mesh.nodes[1],
                            se.mesh.nodes[2]}};
  const Mat2 ja = aff.jacobian();
  for (ReferencePoint p : {ReferencePoint{0.3, 0.3}, {0.7, 0.1}, {0.05, 0.9}}) {
    const MappedPoint mp = strt.map_with_jacobian(p);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(mp.jacobian.m[i][j] == doctest::Approx(ja.m[i][j]).epsilon(1e-13));
  }

  const auto ce = cylinder_element();
  const TrtElement trt(ce.rec, ce.curves.at(0), ce.mesh);
  const double h = 1e-6;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int k = 0; k < 25; ++k) {
    double s = u(rng), r = u(rng) * (0.95 - s);
    if (r < 0.02) r = 0.02;
    const MappedPoint mp = trt.map_with_jacobian({s, r});
    CHECK(mp.det > 0.0);
    const Vec2 ds = (trt.map({s + h, r}) - trt.map({s - h, r})) / (2 * h);
    const Vec2 dr = (trt.map({s, r + h}) - trt.map({s, r - h})) / (2 * h);
    const double scale = 1.0 + std::abs(mp.jacobian.m[0][0]);
    CHECK(std::abs(mp.jacobian.m[0][0] - ds.x) < 1e-6 * scale);
    CHECK(std::abs(mp.jacobian.m[1][0] - ds.y) < 1e-6 * scale);
    CHECK(std::abs(mp.jacobian.m[0][1] - dr.x) < 1e-6 * scale);
    CHECK(std::abs(mp.jacobian.m[1][1] - dr.y) < 1e-6 * scale);
  }
  CHECK_THROWS_AS(trt.map_with_jacobian({0, 0}), GeometryError);
}

TEST_CASE("curved element area: quadrature of det J vs circular-segment oracle") {
  const auto ce = cylinder_element();
  const NurbsCurve& circle = ce.curves.at(0);
  const TrtElement trt(ce.rec, circle, ce.mesh);

  // Analytic area: straight triangle minus the circular segment (the arc
  // bulges toward the interior node, i.e. away from the hole's center).
  const Vec2 c1 = circle.evaluate(ce.rec.xi1);
  const Vec2 c2 = circle.evaluate(ce.rec.xi2);
  const Vec2 x3 = trt.interior_node();
  const double tri_area = 0.5 * std::abs((c2 - c1).cross(x3 - c1));
  const double r = 0.5;
  const double alpha = 2.0 * M_PI / 64.0;
  const double segment = 0.5 * r * r * (alpha - std::sin(alpha));
  const double exact = tri_area - segment;

  double prev_err = 1e300;
  for (int n : {2, 3, 4, 5}) {
    const QuadratureRule rule = nefem_quadrature(n);
    double area = 0.0;
    for (int q = 0; q < rule.size(); ++q)
      area += rule.weights[q] * trt.map_with_jacobian(rule.points[q]).det;
    const double err = std::abs(area - exact);
    CHECK(err <= prev_err + 1e-15);
    prev_err = err;
    if (n == 5) {
      CHECK(err <= 1e-8);
      CHECK(err <= 1e-10);  // in practice the rule is near-exact here
    }
  }
}

TEST_CASE("physical gradients: affine case, null sum, chain-rule identity") {
  const AffineTriangle aff{{Vec2{1, 0}, Vec2{0, 1}, Vec2{0, 0}}};
  const auto grads = physical_gradients(aff.jacobian());
  // Unit right triangle in this node order: classical P1 gradients.
  CHECK((grads[0] - Vec2{1, 0}).norm() < 1e-14);
  CHECK((grads[1] - Vec2{0, 1}).norm() < 1e-14);
  CHECK((grads[2] - Vec2{-1, -1}).norm() < 1e-14);

  const auto ce = cylinder_element();
  const TrtElement trt(ce.rec, ce.curves.at(0), ce.mesh);
  const QuadratureRule rule = nefem_quadrature(4);
  for (int q = 0; q < rule.size(); ++q) {
    const MappedPoint mp = trt.map_with_jacobian(rule.points[q]);
    const auto g = physical_gradients(mp.jacobian);
    const Vec2 sum = g[0] + g[1] + g[2];
    CHECK(sum.norm() < 1e-12);

    // The transform must invert the exact geometry: reference gradients
    // of the map's own coordinates go back to identity.
    const Vec2 gx_ref{mp.jacobian.m[0][0], mp.jacobian.m[0][1]};
    const Vec2 gy_ref{mp.jacobian.m[1][0], mp.jacobian.m[1][1]};
    const Vec2 ex = mp.jacobian.inv_transpose_apply(gx_ref);
    const Vec2 ey = mp.jacobian.inv_transpose_apply(gy_ref);
    CHECK((ex - Vec2{1, 0}).norm() < 1e-12);
    CHECK((ey - Vec2{0, 1}).norm() < 1e-12);
  }
}

TEST_CASE("linear field on straight-edge elements is reproduced exactly") {
  const auto se = straight_element();
  const TrtElement strt(se.rec, se.curves.at(0), se.mesh);
  const auto f = [](Vec2 x) { return 0.7 + 1.3 * x.x - 0.4 * x.y; };
  const double fn[3] = {f(se.mesh.nodes[0]), f(se.mesh.nodes[1]),
                        f(se.mesh.nodes[2])};
  const QuadratureRule rule = nefem_quadrature(4);
  for (int q = 0; q < rule.size(); ++q) {
    const MappedPoint mp = strt.map_with_jacobian(rule.points[q]);
    const auto g = physical_gradients(mp.jacobian);
    Vec2 grad{};
    for (int a = 0; a < 3; ++a) grad += g[a] * fn[a];
    CHECK(grad.x == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(grad.y == doctest::Approx(-0.4).epsilon(1e-12));
  }
}

TEST_CASE("curved element: nodal interpolant of a linear field integrates to "
          "the exact value up to the chord-arc interpolation gap") {
  // With linear fields over exact geometry the interpolant differs from
  // the field by the sagitta of the arc, so the integral mismatch scales
  // with sagitta * area, not with the quadrature error.
  const auto ce = cylinder_element();
  const NurbsCurve& circle = ce.curves.at(0);
  const TrtElement trt(ce.rec, circle, ce.mesh);
  const auto f = [](Vec2 x) { return 0.25 + 2.0 * x.x + 1.0 * x.y; };
  const Vec2 c1 = circle.evaluate(ce.rec.xi1);
  const Vec2 c2 = circle.evaluate(ce.rec.xi2);
  const Vec2 x3 = trt.interior_node();
  const double fn[3] = {f(c1), f(c2), f(x3)};

  const QuadratureRule rule = nefem_quadrature(8);
  double integral_interp = 0.0, integral_exact = 0.0, area = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    const MappedPoint mp = trt.map_with_jacobian(rule.points[q]);
    const auto L = shape_functions(rule.points[q]);
    const double w = rule.weights[q] * mp.det;
    integral_interp += w * (L[0] * fn[0] + L[1] * fn[1] + L[2] * fn[2]);
    integral_exact += w * f(mp.x);
    area += w;
  }
  const double alpha = 2.0 * M_PI / 64.0;
  const double sagitta = 0.5 * (1.0 - std::cos(alpha / 2.0));
  CHECK(std::abs(integral_interp - integral_exact) <= 4.0 * sagitta * area);
  CHECK(std::abs(integral_interp - integral_exact) > 1e-12);  // real gap
}

TEST_CASE("geometric exactness: mesh covers the domain with the exact "
          "circular hole") {
  const Mesh mesh = load_mesh("data/cylinder_g0.mesh");
  const CurveSet curves = read_curves("data/cylinder.nurbs");
  const auto records = classify_elements(mesh, curves, {{0, 0}});
  std::vector<int> rec_of(mesh.n_triangles(), -1);
  for (std::size_t i = 0; i < records.size(); ++i)
    rec_of[records[i].triangle] = static_cast<int>(i);

  const QuadratureRule nef = nefem_quadrature(5);
  double total = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    if (rec_of[t] >= 0) {
      const TrtElement trt(records[rec_of[t]], curves.at(0), mesh);
      for (int q = 0; q < nef.size(); ++q)
        total += nef.weights[q] * trt.map_with_jacobian(nef.points[q]).det;
    } else {
      total += mesh.triangle_area(t);
    }
  }
  // Outer boundary is a regular 64-gon of circumradius 20; the hole is
  // the exact circle of radius 1/2.
  const int n = 64;
  const double polygon = 0.5 * n * 20.0 * 20.0 * std::sin(2.0 * M_PI / n);
  const double exact = polygon - M_PI * 0.25;
  CHECK(std::abs(total - exact) <= 1e-8);
}
