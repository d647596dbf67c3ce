#pragma once

#include <vector>

#include "nefem/dual.hpp"
#include "nefem/slab.hpp"

namespace nefem {

/// Static per-element integration data, shared by every slab over the
/// fixed spatial mesh. Local node order matches the reference shape
/// functions; for boundary-enhanced elements that is (wall node at xi1,
/// wall node at xi2, interior node).
struct QuadPoint {
  double wdet = 0.0;  // quadrature weight times mapping determinant
  double L[3] = {};
  double gx[3] = {};
  double gy[3] = {};
};

/// Natural-side boundary load point (weight includes the line measure).
struct EdgeLoadPoint {
  double w = 0.0;
  double L[3] = {};
  State4<double> h{};
};

struct ElementCache {
  std::array<int, 3> nodes{};
  int triangle = -1;
  double h = 0.0;            // element length scale
  double mass[3][3] = {};    // spatial mass matrix (exactly the jump blocks)
  int q_begin = 0;
  int q_count = 0;
  int load_begin = 0;
  int load_count = 0;
};

/// Local coefficient layout: index = (layer*3 + node)*4 + comp with
/// layer 0 = slab bottom, layer 1 = slab top.
inline constexpr int kElemDofs = 24;

namespace kernel_detail {

template <class T>
inline void interpolate(const double* shape3, const double coeffs[kElemDofs],
                        double tb, double tt, State4<T>& out) {
  for (int c = 0; c < 4; ++c) {
    double bot = 0.0, top = 0.0;
    for (int a = 0; a < 3; ++a) {
      bot += shape3[a] * coeffs[(0 * 3 + a) * 4 + c];
      top += shape3[a] * coeffs[(1 * 3 + a) * 4 + c];
    }
    out[c] = T(tb * bot + tt * top);
  }
}

/// Gradient interpolation, shifted by the first node so uniform fields
/// yield exactly zero (the shape gradients sum to zero analytically but
/// not in floating point).
template <class T>
inline void interpolate_gradient(const double* g3,
                                 const double coeffs[kElemDofs], double tb,
                                 double tt, State4<T>& out) {
  for (int c = 0; c < 4; ++c) {
    const double b0 = coeffs[c];
    const double t0 = coeffs[3 * 4 + c];
    double bot = 0.0, top = 0.0;
    for (int a = 1; a < 3; ++a) {
      bot += g3[a] * (coeffs[(0 * 3 + a) * 4 + c] - b0);
      top += g3[a] * (coeffs[(1 * 3 + a) * 4 + c] - t0);
    }
    out[c] = T(tb * bot + tt * top);
  }
}

}  // namespace kernel_detail

/// Residual of the stabilized space-time weak form on one element:
/// Galerkin temporal+advective and viscous terms, streamline term against
/// the strong residual (its second-derivative part vanishes for linear
/// interpolation and is dropped), residual-driven shock capturing, the
/// bottom-face jump against the previous top trace, and natural boundary
/// loads. `prev` holds the previous top at the element's nodes (12
/// values); tau parameters are frozen inputs.
template <class Law>
void element_residual(const ElementCache& ec, const QuadPoint* qpts,
                      const EdgeLoadPoint* loads, const Law& law,
                      double dt, const double coeffs[kElemDofs],
                      const double prev[12], TauParams tau,
                      const TermFlags& terms, double out[kElemDofs]) {
  for (int i = 0; i < kElemDofs; ++i) out[i] = 0.0;
  const bool viscous = terms.viscous && law.viscous();

  for (int q = 0; q < ec.q_count; ++q) {
    const QuadPoint& qp = qpts[ec.q_begin + q];
    for (int m = 0; m < TimeRule::kPoints; ++m) {
      const double tt = TimeRule::that[m];
      const double tb = 1.0 - tt;
      const double w = qp.wdet * dt * TimeRule::weight[m];

      State4<double> u, ux, uy, ut;
      kernel_detail::interpolate(qp.L, coeffs, tb, tt, u);
      kernel_detail::interpolate_gradient(qp.gx, coeffs, tb, tt, ux);
      kernel_detail::interpolate_gradient(qp.gy, coeffs, tb, tt, uy);
      kernel_detail::interpolate(qp.L, coeffs, -1.0 / dt, 1.0 / dt, ut);
      if (!law.valid(u))
        throw StateError("invalid state at a quadrature point of triangle " +
                         std::to_string(ec.triangle));

      Mat4<double> a1, a2;
      law.jacobians(u, a1, a2);
      State4<double> adv;
      for (int i = 0; i < 4; ++i) {
        adv[i] = ut[i];
        for (int j = 0; j < 4; ++j)
          adv[i] += a1[i][j] * ux[j] + a2[i][j] * uy[j];
      }

      State4<double> w1{}, w2{};
      if (viscous) law.viscous_fluxes(u, ux, uy, w1, w2);
      if (terms.supg && tau.tau_supg != 0.0) {
        for (int i = 0; i < 4; ++i) {
          double s1 = 0.0, s2 = 0.0;
          for (int j = 0; j < 4; ++j) {
            s1 += a1[i][j] * adv[j];
            s2 += a2[i][j] * adv[j];
          }
          w1[i] += tau.tau_supg * s1;
          w2[i] += tau.tau_supg * s2;
        }
      }
      if (terms.shock_capturing && tau.nu_dc != 0.0) {
        for (int i = 0; i < 4; ++i) {
          w1[i] += tau.nu_dc * ux[i];
          w2[i] += tau.nu_dc * uy[i];
        }
      }
      const double galerkin = terms.galerkin ? 1.0 : 0.0;
      for (int layer = 0; layer < 2; ++layer) {
        const double th = layer == 0 ? tb : tt;
        for (int a = 0; a < 3; ++a) {
          double* r = out + (layer * 3 + a) * 4;
          const double cl = w * th * qp.L[a] * galerkin;
          const double cx = w * th * qp.gx[a];
          const double cy = w * th * qp.gy[a];
          for (int i = 0; i < 4; ++i)
            r[i] += cl * adv[i] + cx * w1[i] + cy * w2[i];
        }
      }
    }
  }

  if (terms.jump) {
    for (int a = 0; a < 3; ++a) {
      double* r = out + a * 4;  // bottom layer
      for (int b = 0; b < 3; ++b) {
        const double m = ec.mass[a][b];
        for (int c = 0; c < 4; ++c)
          r[c] += m * (coeffs[b * 4 + c] - prev[b * 4 + c]);
      }
    }
  }

  if (terms.boundary_flux) {
    for (int l = 0; l < ec.load_count; ++l) {
      const EdgeLoadPoint& lp = loads[ec.load_begin + l];
      // Linear-in-time weights both integrate to dt/2 over the slab.
      const double wt = lp.w * 0.5 * dt;
      for (int layer = 0; layer < 2; ++layer) {
        for (int a = 0; a < 3; ++a) {
          double* r = out + (layer * 3 + a) * 4;
          for (int c = 0; c < 4; ++c) r[c] -= wt * lp.L[a] * lp.h[c];
        }
      }
    }
  }
}

/// Exact tangent of element_residual with frozen tau parameters: the
/// integrand is evaluated in forward-mode Dual arithmetic over the local
/// point values (U, U_t, U_x, U_y) and chained through the space-time
/// interpolation. Row-major 24x24 output.
template <class Law>
void element_tangent(const ElementCache& ec, const QuadPoint* qpts,
                     const Law& law, double dt, const double coeffs[kElemDofs],
                     TauParams tau, const TermFlags& terms,
                     double out[kElemDofs * kElemDofs]) {
  using D = Dual<16>;
  for (int i = 0; i < kElemDofs * kElemDofs; ++i) out[i] = 0.0;
  const bool viscous = terms.viscous && law.viscous();

  for (int q = 0; q < ec.q_count; ++q) {
    const QuadPoint& qp = qpts[ec.q_begin + q];
    for (int m = 0; m < TimeRule::kPoints; ++m) {
      const double tt = TimeRule::that[m];
      const double tb = 1.0 - tt;
      const double w = qp.wdet * dt * TimeRule::weight[m];

      State4<double> uv, uxv, uyv, utv;
      kernel_detail::interpolate(qp.L, coeffs, tb, tt, uv);
      kernel_detail::interpolate_gradient(qp.gx, coeffs, tb, tt, uxv);
      kernel_detail::interpolate_gradient(qp.gy, coeffs, tb, tt, uyv);
      kernel_detail::interpolate(qp.L, coeffs, -1.0 / dt, 1.0 / dt, utv);

      State4<D> u, ux, uy, ut;
      for (int c = 0; c < 4; ++c) {
        u[c] = D::seeded(uv[c], c);
        ut[c] = D::seeded(utv[c], 4 + c);
        ux[c] = D::seeded(uxv[c], 8 + c);
        uy[c] = D::seeded(uyv[c], 12 + c);
      }

      Mat4<D> a1, a2;
      law.jacobians(u, a1, a2);
      State4<D> adv;
      for (int i = 0; i < 4; ++i) {
        adv[i] = ut[i];
        for (int j = 0; j < 4; ++j)
          adv[i] += a1[i][j] * ux[j] + a2[i][j] * uy[j];
      }
      State4<D> w1{}, w2{};
      if (viscous) law.viscous_fluxes(u, ux, uy, w1, w2);
      if (terms.supg && tau.tau_supg != 0.0) {
        for (int i = 0; i < 4; ++i) {
          D s1(0.0), s2(0.0);
          for (int j = 0; j < 4; ++j) {
            s1 += a1[i][j] * adv[j];
            s2 += a2[i][j] * adv[j];
          }
          w1[i] += tau.tau_supg * s1;
          w2[i] += tau.tau_supg * s2;
        }
      }
      if (terms.shock_capturing && tau.nu_dc != 0.0) {
        for (int i = 0; i < 4; ++i) {
          w1[i] += tau.nu_dc * ux[i];
          w2[i] += tau.nu_dc * uy[i];
        }
      }
      const double galerkin = terms.galerkin ? 1.0 : 0.0;

      // dI/d(local directions) per test row, then chain rule over trial
      // functions: dU = L_b*theta, dUt = +-L_b/dt, dUx = gx_b*theta, ...
      for (int lp = 0; lp < 2; ++lp) {
        const double thp = lp == 0 ? tb : tt;
        for (int a = 0; a < 3; ++a) {
          const double cl = w * thp * qp.L[a] * galerkin;
          const double cx = w * thp * qp.gx[a];
          const double cy = w * thp * qp.gy[a];
          double dI[4][16];
          for (int i = 0; i < 4; ++i)
            for (int d = 0; d < 16; ++d)
              dI[i][d] = cl * adv[i].d[d] + cx * w1[i].d[d] + cy * w2[i].d[d];

          const int row0 = (lp * 3 + a) * 4;
          for (int lq = 0; lq < 2; ++lq) {
            const double thq = lq == 0 ? tb : tt;
            const double sgn = lq == 0 ? -1.0 : 1.0;
            for (int b = 0; b < 3; ++b) {
              const double fU = qp.L[b] * thq;
              const double fUt = qp.L[b] * sgn / dt;
              const double fUx = qp.gx[b] * thq;
              const double fUy = qp.gy[b] * thq;
              const int col0 = (lq * 3 + b) * 4;
              for (int i = 0; i < 4; ++i) {
                double* krow = out + (row0 + i) * kElemDofs + col0;
                for (int j = 0; j < 4; ++j) {
                  krow[j] += dI[i][j] * fU + dI[i][4 + j] * fUt +
                             dI[i][8 + j] * fUx + dI[i][12 + j] * fUy;
                }
              }
            }
          }
        }
      }
    }
  }

  if (terms.jump) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double m = ec.mass[a][b];
        for (int c = 0; c < 4; ++c)
          out[(a * 4 + c) * kElemDofs + (b * 4 + c)] += m;
      }
    }
  }
}

}  // namespace nefem
