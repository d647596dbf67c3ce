#include "nefem/nurbs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nefem/dense.hpp"

namespace nefem {

namespace {

// Cox-de Boor values on one span: out[0..p] for control points span-p..span.
void basis_funs(const std::vector<double>& knots, int span, double u, int p,
                double* out) {
  std::vector<double> left(p + 1), right(p + 1);
  out[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = u - knots[span + 1 - j];
    right[j] = knots[span + j] - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = out[r] / (right[r + 1] + left[j - r]);
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
}

// Values and derivatives up to n_ders; ders[k][j], k = derivative order.
void ders_basis_funs(const std::vector<double>& knots, int span, double u,
                     int p, int n_ders,
                     std::vector<std::vector<double>>& ders) {
  std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1));
  std::vector<double> left(p + 1), right(p + 1);
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = u - knots[span + 1 - j];
    right[j] = knots[span + j] - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  ders.assign(n_ders + 1, std::vector<double>(p + 1, 0.0));
  for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];

  std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= n_ders; ++k) {
      double d = 0.0;
      const int rk = r - k;
      const int pk = p - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = r - 1 <= pk ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        d += a[s2][k] * ndu[r][pk];
      }
      ders[k][r] = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= n_ders; ++k) {
    for (int j = 0; j <= p; ++j) ders[k][j] *= factor;
    factor *= (p - k);
  }
}

}  // namespace

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
  if (degree_ < 0) throw GeometryError("knot vector: negative degree");
  if (static_cast<int>(knots_.size()) < 2 * (degree_ + 1))
    throw GeometryError("knot vector: too few knots for degree");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i] < knots_[i - 1])
      throw GeometryError("knot vector: knots must be nondecreasing");
  }
  if (knots_.front() != 0.0 || knots_.back() != 1.0)
    throw GeometryError("knot vector: parameter range must be [0,1]");
  for (int i = 0; i <= degree_; ++i) {
    if (knots_[i] != 0.0 || knots_[knots_.size() - 1 - i] != 1.0)
      throw GeometryError("knot vector: ends must be clamped (p+1-fold)");
  }
}

int KnotVector::find_span(double xi) const {
  if (!(xi >= 0.0 && xi <= 1.0)) {
    std::ostringstream os;
    os << "curve parameter " << xi << " outside [0,1]";
    throw GeometryError(os.str());
  }
  const int n = control_count();
  if (xi >= knots_[n]) return n - 1;
  int low = degree_;
  int high = n;
  int mid = (low + high) / 2;
  while (xi < knots_[mid] || xi >= knots_[mid + 1]) {
    if (xi < knots_[mid])
      high = mid;
    else
      low = mid;
    mid = (low + high) / 2;
  }
  return mid;
}

NurbsCurve::NurbsCurve(KnotVector kv, std::vector<Vec2> control_points,
                       std::vector<double> weights)
    : kv_(std::move(kv)), ctrl_(std::move(control_points)),
      w_(std::move(weights)) {
  if (ctrl_.size() != w_.size())
    throw GeometryError("curve: control point / weight count mismatch");
  if (static_cast<int>(ctrl_.size()) != kv_.control_count())
    throw GeometryError("curve: knot vector does not match control count");
  for (double w : w_) {
    if (!(w > 0.0)) throw GeometryError("curve: weights must be positive");
  }
}

bool NurbsCurve::closed() const {
  return (ctrl_.front() - ctrl_.back()).norm() <= 1e-12 * (1.0 + diameter());
}

double NurbsCurve::diameter() const {
  Vec2 lo = ctrl_.front(), hi = ctrl_.front();
  for (const Vec2& b : ctrl_) {
    lo.x = std::min(lo.x, b.x);
    lo.y = std::min(lo.y, b.y);
    hi.x = std::max(hi.x, b.x);
    hi.y = std::max(hi.y, b.y);
  }
  return (hi - lo).norm();
}

BasisSpan NurbsCurve::rational_basis(double xi) const {
  const int p = degree();
  const int span = kv_.find_span(xi);
  BasisSpan out;
  out.first = span - p;
  out.values.resize(p + 1);
  basis_funs(kv_.knots(), span, xi, p, out.values.data());
  double wsum = 0.0;
  for (int k = 0; k <= p; ++k) {
    out.values[k] *= w_[out.first + k];
    wsum += out.values[k];
  }
  if (!(wsum > 0.0)) throw GeometryError("curve: degenerate weight sum");
  for (double& v : out.values) v /= wsum;
  return out;
}

void NurbsCurve::homogeneous_derivs(double xi, int order, Vec2* a,
                                    double* w) const {
  const int p = degree();
  const int span = kv_.find_span(xi);
  std::vector<std::vector<double>> ders;
  ders_basis_funs(kv_.knots(), span, xi, p, order, ders);
  for (int k = 0; k <= order; ++k) {
    a[k] = Vec2{};
    w[k] = 0.0;
    for (int j = 0; j <= p; ++j) {
      const int i = span - p + j;
      a[k] += ders[k][j] * w_[i] * ctrl_[i];
      w[k] += ders[k][j] * w_[i];
    }
  }
}

Vec2 NurbsCurve::evaluate(double xi) const {
  Vec2 a[1];
  double w[1];
  homogeneous_derivs(xi, 0, a, w);
  return a[0] / w[0];
}

Vec2 NurbsCurve::derivative(double xi, int order) const {
  if (order < 1 || order > 2)
    throw GeometryError("curve derivative: order must be 1 or 2");
  Vec2 a[3];
  double w[3];
  homogeneous_derivs(xi, order, a, w);
  const Vec2 c = a[0] / w[0];
  const Vec2 c1 = (a[1] - w[1] * c) / w[0];
  if (order == 1) return c1;
  return (a[2] - 2.0 * w[1] * c1 - w[2] * c) / w[0];
}

Vec2 NurbsCurve::outward_normal(double xi) const {
  const Vec2 t = derivative(xi, 1);
  const double n = t.norm();
  if (!(n > 1e-14 * (1.0 + diameter())))
    throw GeometryError("curve normal: zero tangent");
  return (t / n).rotated_cw();
}

double NurbsCurve::closest_point(Vec2 q, std::optional<double> xi0) const {
  double xi;
  if (xi0) {
    xi = std::clamp(*xi0, 0.0, 1.0);
  } else {
    // Coarse deterministic seed; ties resolve to the lowest sample.
    constexpr int kScan = 256;
    double best_d2 = std::numeric_limits<double>::max();
    double best_xi = 0.0;
    for (int k = 0; k < kScan; ++k) {
      const double s = static_cast<double>(k) / (kScan - 1);
      const double d2 = (q - evaluate(s)).norm2();
      if (d2 < best_d2) {
        best_d2 = d2;
        best_xi = s;
      }
    }
    xi = best_xi;
  }

  const double scale = 1.0 + diameter();
  double f = (q - evaluate(xi)).norm2();
  for (int it = 0; it < 50; ++it) {
    Vec2 a[3];
    double w[3];
    homogeneous_derivs(xi, 2, a, w);
    const Vec2 c = a[0] / w[0];
    const Vec2 c1 = (a[1] - w[1] * c) / w[0];
    const Vec2 c2 = (a[2] - 2.0 * w[1] * c1 - w[2] * c) / w[0];
    const Vec2 r = q - c;
    const double g = r.dot(c1);  // -f'/2
    const double tol = 0.25e-12 * scale * (1.0 + c1.norm());
    if (std::abs(g) <= tol) return xi;
    const double curv = c1.norm2() - r.dot(c2);  // f''/2
    double step = curv > 1e-30 * scale ? g / curv : (g > 0 ? 0.1 : -0.1);
    step = std::clamp(step, -0.25, 0.25);

    // Damped descent on the squared distance; never accept a worse point.
    bool improved = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
      const double trial = std::clamp(xi + alpha * step, 0.0, 1.0);
      if (trial == xi) break;
      const double ft = (q - evaluate(trial)).norm2();
      if (ft < f) {
        xi = trial;
        f = ft;
        improved = true;
        break;
      }
    }
    if (!improved) {
      // Boundary of the parameter range, or the floating-point floor of
      // the distance function. Accept when numerically stationary.
      const bool at_end = (xi == 0.0 && g < 0.0) || (xi == 1.0 && g > 0.0);
      if (at_end || std::abs(g) <= 1e-9 * scale * (1.0 + c1.norm())) return xi;
      std::ostringstream os;
      os << "closest_point: projection stalled at xi=" << xi
         << " distance=" << std::sqrt(f);
      throw GeometryError(os.str());
    }
  }
  std::ostringstream os;
  os << "closest_point: no convergence after 50 iterations; best xi=" << xi
     << " distance=" << std::sqrt(f);
  throw GeometryError(os.str());
}

FitResult fit_profile(const std::vector<Vec2>& samples, int degree,
                      int n_ctrl) {
  const int m = static_cast<int>(samples.size());
  if (n_ctrl < degree + 1)
    throw GeometryError("fit_profile: need n_ctrl >= degree+1");
  if (m < n_ctrl) throw GeometryError("fit_profile: need samples >= n_ctrl");

  // Chord-length parameters.
  std::vector<double> t(m, 0.0);
  for (int k = 1; k < m; ++k)
    t[k] = t[k - 1] + (samples[k] - samples[k - 1]).norm();
  const double total = t.back();
  if (!(total > 0.0)) throw GeometryError("fit_profile: degenerate samples");
  for (double& v : t) v /= total;
  t.back() = 1.0;

  // Clamped knot vector with uniform interior knots.
  std::vector<double> knots(n_ctrl + degree + 1);
  const int n_spans = n_ctrl - degree;
  for (int i = 0; i <= degree; ++i) {
    knots[i] = 0.0;
    knots[n_ctrl + i] = 1.0;
  }
  for (int j = 1; j < n_spans; ++j)
    knots[degree + j] = static_cast<double>(j) / n_spans;
  KnotVector kv(degree, knots);

  // End points interpolated exactly; least squares for the interior.
  const int n_free = n_ctrl - 2;
  std::vector<double> row(degree + 1);
  DenseMatrix ata(n_free, n_free);
  std::vector<double> rhs_x(n_free, 0.0), rhs_y(n_free, 0.0);
  const Vec2 p0 = samples.front();
  const Vec2 pn = samples.back();
  for (int k = 1; k < m - 1; ++k) {
    const int span = kv.find_span(t[k]);
    basis_funs(knots, span, t[k], degree, row.data());
    const int first = span - degree;
    double n_first = 0.0, n_last = 0.0;
    for (int j = 0; j <= degree; ++j) {
      const int col = first + j;
      if (col == 0) n_first = row[j];
      if (col == n_ctrl - 1) n_last = row[j];
    }
    const Vec2 r = samples[k] - n_first * p0 - n_last * pn;
    for (int j = 0; j <= degree; ++j) {
      const int cj = first + j - 1;
      if (cj < 0 || cj >= n_free) continue;
      for (int l = 0; l <= degree; ++l) {
        const int cl = first + l - 1;
        if (cl < 0 || cl >= n_free) continue;
        ata(cj, cl) += row[j] * row[l];
      }
      rhs_x[cj] += row[j] * r.x;
      rhs_y[cj] += row[j] * r.y;
    }
  }
  std::vector<double> sol_x, sol_y;
  try {
    sol_x = solve_dense(ata, rhs_x);
    sol_y = solve_dense(ata, rhs_y);
  } catch (const GeometryError&) {
    throw GeometryError("fit_profile: rank-deficient fit system");
  }

  std::vector<Vec2> ctrl(n_ctrl);
  ctrl.front() = p0;
  ctrl.back() = pn;
  for (int j = 0; j < n_free; ++j) ctrl[j + 1] = Vec2{sol_x[j], sol_y[j]};

  FitResult out{NurbsCurve(kv, ctrl, std::vector<double>(n_ctrl, 1.0)), 0.0};
  for (int k = 0; k < m; ++k) {
    out.max_deviation = std::max(
        out.max_deviation, (out.curve.evaluate(t[k]) - samples[k]).norm());
  }
  return out;
}

NurbsCurve make_circle(Vec2 center, double radius, bool clockwise) {
  const double r = radius;
  const double s = std::sqrt(0.5);
  std::vector<Vec2> pts = {{r, 0},  {r, r},   {0, r},  {-r, r}, {-r, 0},
                           {-r, -r}, {0, -r}, {r, -r}, {r, 0}};
  if (clockwise) {
    for (Vec2& p : pts) p.y = -p.y;
  }
  for (Vec2& p : pts) p += center;
  std::vector<double> weights = {1, s, 1, s, 1, s, 1, s, 1};
  KnotVector kv(2, {0, 0, 0, 0.25, 0.25, 0.5, 0.5, 0.75, 0.75, 1, 1, 1});
  return NurbsCurve(kv, pts, weights);
}

double naca_thickness(double x, double thickness) {
  const double c = 5.0 * thickness;
  return c * (0.2969 * std::sqrt(x) - 0.1260 * x - 0.3516 * x * x +
              0.2843 * x * x * x - 0.1015 * x * x * x * x);
}

std::vector<Vec2> naca0012_samples(int n_per_side) {
  const int n = n_per_side;
  std::vector<Vec2> pts;
  pts.reserve(2 * n + 1);
  // Open-profile ordinate at x = 1, removed by a linear ramp so the
  // trailing-edge samples land exactly at (1, 0).
  const double y_te = naca_thickness(1.0);
  auto surface = [&](double x) { return naca_thickness(x) - x * y_te; };
  auto x_at = [&](int j) { return 0.5 * (1.0 - std::cos(M_PI * j / n)); };
  // Trailing edge -> lower surface -> leading edge.
  for (int j = n; j >= 1; --j) {
    const double x = x_at(j);
    pts.push_back({x, -surface(x)});
  }
  pts.push_back({0.0, 0.0});
  // Leading edge -> upper surface -> trailing edge.
  for (int j = 1; j <= n; ++j) {
    const double x = x_at(j);
    pts.push_back({x, surface(x)});
  }
  pts.front() = {1.0, 0.0};
  pts.back() = {1.0, 0.0};
  return pts;
}

}  // namespace nefem
