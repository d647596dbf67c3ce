#include "nefem/stabilization.hpp"

#include <algorithm>
#include <cmath>

namespace nefem {

double tau_supg(const ConservationState& u, const GasModel& gas, double h,
                double dt) {
  const double speed = std::hypot(u.mx, u.my) / u.rho;
  const double c = sound_speed(u, gas);
  const double t_time = 2.0 / dt;
  const double t_adv = 2.0 * (speed + c) / h;
  double sum = t_time * t_time + t_adv * t_adv;
  if (!gas.inviscid) {
    const double nu = std::max(gas.mu, gas.mu * gas.gamma / gas.prandtl) / u.rho;
    const double t_diff = 4.0 * nu / (h * h);
    sum += t_diff * t_diff;
  }
  return 1.0 / std::sqrt(sum);
}

double tau_dc(const State4<double>& strong_residual, const double grad[4][2],
              double h, const FreeStream& fs, const ConservationState& u,
              const GasModel& gas, double clamp_factor) {
  const State4<double> scale = {fs.rho, fs.rho * fs.speed(),
                                fs.rho * fs.speed(), fs.rho * fs.e};
  double res2 = 0.0;
  double grad2 = 0.0;
  for (int c = 0; c < 4; ++c) {
    const double rs = strong_residual[c] / scale[c];
    res2 += rs * rs;
    for (int d = 0; d < 2; ++d) {
      const double gs = grad[c][d] / scale[c];
      grad2 += gs * gs;
    }
  }
  constexpr double kEps = 1e-12;
  const double nu =
      0.5 * h * std::sqrt(res2) / std::max(std::sqrt(grad2), kEps);
  const double speed = std::hypot(u.mx, u.my) / u.rho;
  const double nu_max = clamp_factor * 0.5 * h * (speed + sound_speed(u, gas));
  return std::min(nu, nu_max);
}

}  // namespace nefem
