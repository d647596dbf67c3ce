#pragma once

#include "nefem/fluxes.hpp"

namespace nefem {

/// Compressible Navier-Stokes/Euler system in conservation variables.
/// Satisfies the (implicit) law concept used by the element kernel:
/// jacobians(), viscous_fluxes(), viscous(), valid().
struct CompressibleLaw {
  GasModel gas;

  bool viscous() const { return !gas.inviscid; }
  bool valid(const State4<double>& u) const { return valid_state(u, gas); }

  template <class T>
  void jacobians(const State4<T>& u, Mat4<T>& a1, Mat4<T>& a2) const {
    euler_jacobians_raw(u, gas.gamma, a1, a2);
  }
  template <class T>
  void viscous_fluxes(const State4<T>& u, const State4<T>& gx,
                      const State4<T>& gy, State4<T>& e1, State4<T>& e2) const {
    viscous_flux_raw(u, gx, gy, gas, e1, e2);
  }
};

/// Constant-coefficient advective-diffusive system. Degenerate settings
/// (zero advection, fixed diffusion) exercise the space-time machinery
/// against closed-form results; also the linear-solver path, where Newton
/// must finish in one step.
struct LinearSystemLaw {
  Mat4<double> a1{};
  Mat4<double> a2{};
  Mat4<double> k[2][2]{};
  bool has_diffusion = false;

  bool viscous() const { return has_diffusion; }
  bool valid(const State4<double>&) const { return true; }

  template <class T>
  void jacobians(const State4<T>&, Mat4<T>& out1, Mat4<T>& out2) const {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        out1[i][j] = T(a1[i][j]);
        out2[i][j] = T(a2[i][j]);
      }
  }
  template <class T>
  void viscous_fluxes(const State4<T>&, const State4<T>& gx,
                      const State4<T>& gy, State4<T>& e1, State4<T>& e2) const {
    for (int i = 0; i < 4; ++i) {
      e1[i] = T(0.0);
      e2[i] = T(0.0);
      for (int j = 0; j < 4; ++j) {
        e1[i] += k[0][0][i][j] * gx[j] + k[0][1][i][j] * gy[j];
        e2[i] += k[1][0][i][j] * gx[j] + k[1][1][i][j] * gy[j];
      }
    }
  }
};

}  // namespace nefem
