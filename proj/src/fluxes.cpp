#include "nefem/fluxes.hpp"

#include <cmath>
#include <sstream>

namespace nefem {

double pressure(const ConservationState& u, const GasModel& gas) {
  if (!(u.rho > 0.0)) {
    std::ostringstream os;
    os << "invalid state: density " << u.rho;
    throw StateError(os.str());
  }
  const double p = pressure_raw(u.as_array(), gas.gamma);
  if (!(p > 0.0) || !std::isfinite(p)) {
    std::ostringstream os;
    os << "invalid state: pressure " << p << " at rho=" << u.rho
       << " E=" << u.E;
    throw StateError(os.str());
  }
  return p;
}

double sound_speed(const ConservationState& u, const GasModel& gas) {
  return std::sqrt(gas.gamma * pressure(u, gas) / u.rho);
}

double mach_number(const ConservationState& u, const GasModel& gas) {
  const double speed = std::hypot(u.mx, u.my) / u.rho;
  return speed / sound_speed(u, gas);
}

void euler_flux(const ConservationState& u, const GasModel& gas,
                State4<double>& f1, State4<double>& f2) {
  pressure(u, gas);  // state check
  euler_flux_raw(u.as_array(), gas.gamma, f1, f2);
}

void viscous_flux(const ConservationState& u, const double grad[4][2],
                  const GasModel& gas, State4<double>& e1,
                  State4<double>& e2) {
  State4<double> gx, gy;
  for (int c = 0; c < 4; ++c) {
    gx[c] = grad[c][0];
    gy[c] = grad[c][1];
  }
  if (!gas.inviscid) pressure(u, gas);
  viscous_flux_raw(u.as_array(), gx, gy, gas, e1, e2);
}

void euler_jacobian(const ConservationState& u, const GasModel& gas,
                    Mat4<double>& a1, Mat4<double>& a2) {
  pressure(u, gas);
  euler_jacobians_raw(u.as_array(), gas.gamma, a1, a2);
}

void diffusivity_matrices(const ConservationState& u, const GasModel& gas,
                          Mat4<double> k[2][2]) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (auto& row : k[i][j]) row = {0.0, 0.0, 0.0, 0.0};
  if (gas.inviscid) return;
  pressure(u, gas);

  const double inv_rho = 1.0 / u.rho;
  const double vx = u.mx * inv_rho;
  const double vy = u.my * inv_rho;
  const double q2 = vx * vx + vy * vy;
  const double e_over_rho = u.E * inv_rho;
  const double mu_r = gas.mu * inv_rho;
  const double kap_r =
      gas.mu * gas.gamma / (gas.prandtl * (gas.gamma - 1.0)) * inv_rho;
  // Heat-flux row: kappa/rho * d(e - |u|^2/2) in conservation variables.
  const std::array<double, 4> heat = {kap_r * (q2 - e_over_rho), -kap_r * vx,
                                      -kap_r * vy, kap_r};

  auto& k11 = k[0][0];
  k11[1] = {-mu_r * (4.0 / 3.0) * vx, mu_r * 4.0 / 3.0, 0.0, 0.0};
  k11[2] = {-mu_r * vy, 0.0, mu_r, 0.0};
  for (int c = 0; c < 4; ++c)
    k11[3][c] = vx * k11[1][c] + vy * k11[2][c] + heat[c];

  auto& k12 = k[0][1];
  k12[1] = {mu_r * (2.0 / 3.0) * vy, 0.0, -mu_r * 2.0 / 3.0, 0.0};
  k12[2] = {-mu_r * vx, mu_r, 0.0, 0.0};
  for (int c = 0; c < 4; ++c) k12[3][c] = vx * k12[1][c] + vy * k12[2][c];

  auto& k21 = k[1][0];
  k21[1] = {-mu_r * vy, 0.0, mu_r, 0.0};
  k21[2] = {mu_r * (2.0 / 3.0) * vx, -mu_r * 2.0 / 3.0, 0.0, 0.0};
  for (int c = 0; c < 4; ++c) k21[3][c] = vx * k21[1][c] + vy * k21[2][c];

  auto& k22 = k[1][1];
  k22[1] = {-mu_r * vx, mu_r, 0.0, 0.0};
  k22[2] = {-mu_r * (4.0 / 3.0) * vy, 0.0, mu_r * 4.0 / 3.0, 0.0};
  for (int c = 0; c < 4; ++c)
    k22[3][c] = vx * k22[1][c] + vy * k22[2][c] + heat[c];
}

double pressure_coefficient(double p, const FreeStream& fs,
                            const GasModel& gas) {
  const double q = fs.dynamic_head();
  if (!(q > 0.0))
    throw StateError("pressure coefficient undefined at zero free-stream speed");
  return (p - fs.pressure(gas)) / q;
}

}  // namespace nefem
