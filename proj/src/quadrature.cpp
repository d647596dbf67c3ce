#include "nefem/quadrature.hpp"

#include <cmath>

namespace nefem {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  // Nodes on [-1,1] by Newton on P_n, then mapped to [0,1].
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);  // note: reversed so x ascends
    w[i] = 1.0 / ((1.0 - z * z) * pp * pp);
  }
}

QuadratureRule standard_quadrature(int order) {
  QuadratureRule rule;
  auto add_center = [&](double w) {
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(w);
  };
  // Three-fold symmetric orbit with barycentric (a, a, 1-2a).
  auto add_orbit = [&](double a, double w) {
    rule.points.push_back({a, a});
    rule.points.push_back({1.0 - 2.0 * a, a});
    rule.points.push_back({a, 1.0 - 2.0 * a});
    rule.weights.insert(rule.weights.end(), 3, w);
  };
  switch (order) {
    case 1:
      add_center(0.5);
      break;
    case 2:
      add_orbit(1.0 / 6.0, 1.0 / 6.0);
      break;
    case 3:
    case 4:
      // Degree-4 rule with positive weights (two orbits of three).
      add_orbit(0.445948490915965, 0.111690794839005);
      add_orbit(0.091576213509771, 0.054975871827661);
      break;
    case 5:
      add_center(0.1125);
      add_orbit(0.470142064105115, 0.066197076394253);
      add_orbit(0.101286507323456, 0.062969590272414);
      break;
    default:
      throw Error("standard_quadrature: unsupported order " +
                  std::to_string(order));
  }
  return rule;
}

QuadratureRule nefem_quadrature(int n) {
  if (n < 2) throw Error("nefem_quadrature: need n >= 2 points per direction");
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  // (u,v) in [0,1]^2 -> (s,r) = (u(1-v), uv); d(s,r) = u du dv. The line
  // u = 0 collapses onto the interior vertex, u = 1 is the curved edge.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = x[i];
      const double v = x[j];
      rule.points.push_back({u * (1.0 - v), u * v});
      rule.weights.push_back(w[i] * w[j] * u);
    }
  }
  return rule;
}

}  // namespace nefem
