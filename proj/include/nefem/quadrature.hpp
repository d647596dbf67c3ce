#pragma once

#include <array>
#include <vector>

#include "nefem/error.hpp"
#include "nefem/vec2.hpp"

namespace nefem {

/// Point in the reference triangle {s >= 0, r >= 0, s + r <= 1}. Vertex
/// (1,0) is the first curved-edge node, (0,1) the second, (0,0) the
/// interior node; the curved edge is s + r = 1.
struct ReferencePoint {
  double s = 0.0;
  double r = 0.0;
};

struct QuadratureRule {
  std::vector<ReferencePoint> points;
  std::vector<double> weights;  // sum to the reference area 1/2
  int size() const { return static_cast<int>(points.size()); }
};

/// Linear shape functions L1 = s, L2 = r, L3 = 1-s-r and their constant
/// reference gradients. L3 vanishes identically on the curved edge.
inline std::array<double, 3> shape_functions(ReferencePoint p) {
  return {p.s, p.r, 1.0 - p.s - p.r};
}
inline const std::array<Vec2, 3>& shape_gradients_ref() {
  static const std::array<Vec2, 3> g = {Vec2{1, 0}, Vec2{0, 1}, Vec2{-1, -1}};
  return g;
}

/// Symmetric rules with positive weights, exact for polynomials of at
/// least the requested order (orders 1..5).
QuadratureRule standard_quadrature(int order);

/// Collapsed tensor-product Gauss-Legendre rule: the unit square maps to
/// the triangle with the collapsed vertex at the interior node (0,0), so
/// no point hits the singular vertex of the curved mapping and points
/// concentrate toward the curved edge. n points per direction (n >= 2).
QuadratureRule nefem_quadrature(int n);

/// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace nefem
