#pragma once

#include <optional>
#include <vector>

#include "nefem/error.hpp"
#include "nefem/vec2.hpp"

namespace nefem {

/// Clamped knot vector on [0,1]: nondecreasing, with the first and last
/// knot repeated degree+1 times.
class KnotVector {
 public:
  KnotVector() = default;
  KnotVector(int degree, std::vector<double> knots);

  int degree() const { return degree_; }
  const std::vector<double>& knots() const { return knots_; }
  /// Number of control points the vector supports (n = #knots - p - 1).
  int control_count() const {
    return static_cast<int>(knots_.size()) - degree_ - 1;
  }

  /// Index i with knots[i] <= xi < knots[i+1]; xi = 1 returns the last
  /// nontrivial span. Throws for xi outside [0,1].
  int find_span(double xi) const;

 private:
  int degree_ = 0;
  std::vector<double> knots_;
};

/// Rational basis values over one span: values[k] belongs to control point
/// first + k, k = 0..degree.
struct BasisSpan {
  int first = 0;
  std::vector<double> values;
};

/// Planar NURBS curve C(xi) = sum R_i(xi) B_i with strictly positive
/// weights. Immutable after construction; all evaluation is pure.
///
/// Orientation convention: curves bounding the fluid are parametrized so
/// the fluid lies to the LEFT of the direction of increasing xi. Closed
/// boundaries are clamped curves whose end control points coincide; the
/// seam sits at xi = 0.
class NurbsCurve {
 public:
  NurbsCurve() = default;
  NurbsCurve(KnotVector kv, std::vector<Vec2> control_points,
             std::vector<double> weights);

  int degree() const { return kv_.degree(); }
  const KnotVector& knot_vector() const { return kv_; }
  const std::vector<Vec2>& control_points() const { return ctrl_; }
  const std::vector<double>& weights() const { return w_; }
  /// Closed in the clamped sense: first and last control point coincide.
  bool closed() const;

  BasisSpan rational_basis(double xi) const;
  Vec2 evaluate(double xi) const;
  /// Analytic derivative of order 1 or 2 (quotient rule on the weighted
  /// form). At interior knots this is the right-sided limit, at xi = 1 the
  /// left-sided one, matching the span convention of find_span.
  Vec2 derivative(double xi, int order = 1) const;
  /// Unit tangent rotated -90 degrees; points out of the fluid, into the
  /// solid, under the fluid-on-the-left convention.
  Vec2 outward_normal(double xi) const;

  /// Parameter of the stationary point of |q - C(xi)|^2 found by damped
  /// Newton, seeded by a 256-sample scan when no guess is given.
  double closest_point(Vec2 q, std::optional<double> xi0 = std::nullopt) const;

  /// Loose curve extent, used for tolerance scaling.
  double diameter() const;

 private:
  // Weighted-form value A(xi) = sum w_i N_i B_i and scalar W(xi), with
  // derivatives up to `order`.
  void homogeneous_derivs(double xi, int order, Vec2* a, double* w) const;

  KnotVector kv_;
  std::vector<Vec2> ctrl_;
  std::vector<double> w_;
};

struct FitResult {
  NurbsCurve curve;
  double max_deviation = 0.0;  // max |C(t_k) - q_k| over the samples
};

/// Least-squares B-spline fit (unit weights): chord-length parameters,
/// clamped knot vector with uniform interior knots, end points
/// interpolated exactly.
FitResult fit_profile(const std::vector<Vec2>& samples, int degree,
                      int n_ctrl);

/// Exact rational-quadratic circle out of four 90-degree arcs with
/// weights (1, sqrt(2)/2, 1) each; nine control points, seam at angle 0.
/// `clockwise = true` orients the curve for a fluid domain outside the
/// circle (fluid on the left).
NurbsCurve make_circle(Vec2 center, double radius, bool clockwise);

/// Analytic NACA 4-digit symmetric thickness (12% by default), unit chord.
double naca_thickness(double x, double thickness = 0.12);

/// Sample points for the NACA0012 profile ordered trailing edge -> lower
/// surface -> leading edge -> upper surface -> trailing edge (clockwise,
/// fluid on the left), with the trailing edge closed to (1, 0).
std::vector<Vec2> naca0012_samples(int n_per_side);

}  // namespace nefem
