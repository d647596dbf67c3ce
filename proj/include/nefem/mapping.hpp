#pragma once

#include <array>

#include "nefem/classify.hpp"
#include "nefem/quadrature.hpp"

namespace nefem {

/// Reference-to-physical data at one point.
struct MappedPoint {
  Vec2 x;
  Mat2 jacobian;  // d(x,y)/d(s,r)
  double det = 0.0;
};

/// Affine map of a straight triangle onto the same reference element as
/// the curved mapping (vertex order matches shape_functions).
struct AffineTriangle {
  std::array<Vec2, 3> x;  // nodes at (1,0), (0,1), (0,0)

  Vec2 map(ReferencePoint p) const {
    const auto L = shape_functions(p);
    return L[0] * x[0] + L[1] * x[1] + L[2] * x[2];
  }
  Mat2 jacobian() const {
    Mat2 j;
    j.m[0][0] = x[0].x - x[2].x;
    j.m[0][1] = x[1].x - x[2].x;
    j.m[1][0] = x[0].y - x[2].y;
    j.m[1][1] = x[1].y - x[2].y;
    return j;
  }
};

/// Curved boundary triangle: one edge follows the NURBS between xi1 and
/// xi2, the opposite vertex x3 is interior. The map blends the interior
/// node with the exact curve, so the curved edge is reproduced exactly.
class TrtElement {
 public:
  TrtElement(const NefemElementRecord& rec, const NurbsCurve& curve,
             const Mesh& mesh);

  /// Physical point. Defined on the whole closed triangle; the collapsed
  /// vertex (0,0) returns the interior node.
  Vec2 map(ReferencePoint p) const;

  /// Analytic Jacobian; not defined at (0,0) (quadrature never puts a
  /// point there). Throws GeometryError when the determinant is not
  /// positive (tangled element).
  MappedPoint map_with_jacobian(ReferencePoint p) const;

  double xi1() const { return xi1_; }
  double xi2() const { return xi2_; }
  Vec2 interior_node() const { return x3_; }
  const NurbsCurve& curve() const { return *curve_; }

  /// Curve parameter of a point on the curved edge (s + r = 1).
  double edge_parameter(double s) const { return s * xi1_ + (1.0 - s) * xi2_; }

 private:
  const NurbsCurve* curve_;
  Vec2 x3_;
  double xi1_, xi2_;
};

/// grad_x L = J^{-T} grad_{(s,r)} L. Throws on a singular Jacobian.
std::array<Vec2, 3> physical_gradients(const Mat2& jacobian);

}  // namespace nefem
