#include "nefem/mapping.hpp"

#include <cmath>
#include <sstream>

namespace nefem {

TrtElement::TrtElement(const NefemElementRecord& rec, const NurbsCurve& curve,
                       const Mesh& mesh)
    : curve_(&curve), x3_(mesh.nodes[rec.interior_node]), xi1_(rec.xi1),
      xi2_(rec.xi2) {}

Vec2 TrtElement::map(ReferencePoint p) const {
  const double sr = p.s + p.r;
  if (sr <= 0.0) return x3_;  // prefactor (s+r) vanishes
  const double theta = (p.s * xi1_ + p.r * xi2_) / sr;
  return (1.0 - sr) * x3_ + sr * curve_->evaluate(theta);
}

MappedPoint TrtElement::map_with_jacobian(ReferencePoint p) const {
  const double sr = p.s + p.r;
  if (sr <= 0.0)
    throw GeometryError("curved map Jacobian requested at the collapsed vertex");
  const double theta = (p.s * xi1_ + p.r * xi2_) / sr;
  const Vec2 c = curve_->evaluate(theta);
  const Vec2 c1 = curve_->derivative(theta, 1);
  const double dxi = xi1_ - xi2_;

  MappedPoint out;
  out.x = (1.0 - sr) * x3_ + sr * c;
  const Vec2 ds = c - x3_ + c1 * (p.r * dxi / sr);
  const Vec2 dr = c - x3_ - c1 * (p.s * dxi / sr);
  out.jacobian.m[0][0] = ds.x;
  out.jacobian.m[1][0] = ds.y;
  out.jacobian.m[0][1] = dr.x;
  out.jacobian.m[1][1] = dr.y;
  out.det = out.jacobian.det();
  if (!(out.det > 0.0)) {
    std::ostringstream os;
    os << "tangled curved element: nonpositive Jacobian determinant "
       << out.det << " at (s,r)=(" << p.s << "," << p.r << ")";
    throw GeometryError(os.str());
  }
  return out;
}

std::array<Vec2, 3> physical_gradients(const Mat2& jacobian) {
  const double det = jacobian.det();
  if (!(std::abs(det) > 0.0))
    throw GeometryError("physical_gradients: singular mapping Jacobian");
  std::array<Vec2, 3> out;
  const auto& gref = shape_gradients_ref();
  for (int a = 0; a < 3; ++a) out[a] = jacobian.inv_transpose_apply(gref[a]);
  return out;
}

}  // namespace nefem
