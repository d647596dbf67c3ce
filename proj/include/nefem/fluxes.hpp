#pragma once

#include "nefem/flow_state.hpp"

namespace nefem {

// ---------------------------------------------------------------------------
// Templated kernels (double for residuals, Dual<> for exact tangents).
// ---------------------------------------------------------------------------

template <class T>
T pressure_raw(const State4<T>& u, double gamma) {
  return (gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0]);
}

template <class T>
void euler_flux_raw(const State4<T>& u, double gamma, State4<T>& f1,
                    State4<T>& f2) {
  const T vx = u[1] / u[0];
  const T vy = u[2] / u[0];
  const T p = pressure_raw(u, gamma);
  const T et_p = u[3] + p;
  f1 = {u[1], u[1] * vx + p, u[2] * vx, vx * et_p};
  f2 = {u[2], u[1] * vy, u[2] * vy + p, vy * et_p};
}

/// Conservation-variable Jacobians of the two Euler flux vectors.
template <class T>
void euler_jacobians_raw(const State4<T>& u, double gamma, Mat4<T>& a1,
                         Mat4<T>& a2) {
  const double g1 = gamma - 1.0;
  const T vx = u[1] / u[0];
  const T vy = u[2] / u[0];
  const T q2 = vx * vx + vy * vy;
  const T phi = 0.5 * g1 * q2;
  const T p = pressure_raw(u, gamma);
  const T ht = (u[3] + p) / u[0];  // total enthalpy

  a1[0] = {T(0.0), T(1.0), T(0.0), T(0.0)};
  a1[1] = {phi - vx * vx, (3.0 - gamma) * vx, -g1 * vy, T(g1)};
  a1[2] = {-vx * vy, vy, vx, T(0.0)};
  a1[3] = {vx * (phi - ht), ht - g1 * vx * vx, -g1 * vx * vy, gamma * vx};

  a2[0] = {T(0.0), T(0.0), T(1.0), T(0.0)};
  a2[1] = {-vx * vy, vy, vx, T(0.0)};
  a2[2] = {phi - vy * vy, -g1 * vx, (3.0 - gamma) * vy, T(g1)};
  a2[3] = {vy * (phi - ht), -g1 * vx * vy, ht - g1 * vy * vy, gamma * vy};
}

/// Viscous flux vectors from conservation-variable gradients gx = dU/dx,
/// gy = dU/dy. Newtonian stress with zero bulk viscosity; heat flux
/// proportional to the internal-energy gradient.
template <class T>
void viscous_flux_raw(const State4<T>& u, const State4<T>& gx,
                      const State4<T>& gy, const GasModel& gas, State4<T>& e1,
                      State4<T>& e2) {
  if (gas.inviscid) {
    e1 = {T(0.0), T(0.0), T(0.0), T(0.0)};
    e2 = e1;
    return;
  }
  const double mu = gas.mu;
  const double kappa = mu * gas.gamma / (gas.prandtl * (gas.gamma - 1.0));
  const T inv_rho = 1.0 / u[0];
  const T vx = u[1] * inv_rho;
  const T vy = u[2] * inv_rho;
  const T q2 = vx * vx + vy * vy;
  const T e_over_rho = u[3] * inv_rho;

  // Primitive gradients via the chain rule.
  const T ux = (gx[1] - vx * gx[0]) * inv_rho;
  const T uy = (gy[1] - vx * gy[0]) * inv_rho;
  const T wx = (gx[2] - vy * gx[0]) * inv_rho;
  const T wy = (gy[2] - vy * gy[0]) * inv_rho;
  const T eint_x =
      (gx[3] - vx * gx[1] - vy * gx[2] + (q2 - e_over_rho) * gx[0]) * inv_rho;
  const T eint_y =
      (gy[3] - vx * gy[1] - vy * gy[2] + (q2 - e_over_rho) * gy[0]) * inv_rho;

  const T tau11 = mu * ((4.0 / 3.0) * ux - (2.0 / 3.0) * wy);
  const T tau22 = mu * ((4.0 / 3.0) * wy - (2.0 / 3.0) * ux);
  const T tau12 = mu * (uy + wx);

  e1 = {T(0.0), tau11, tau12, kappa * eint_x + tau11 * vx + tau12 * vy};
  e2 = {T(0.0), tau12, tau22, kappa * eint_y + tau12 * vx + tau22 * vy};
}

// ---------------------------------------------------------------------------
// Checked public operations.
// ---------------------------------------------------------------------------

/// Ideal-gas pressure; throws StateError for a nonpositive result.
double pressure(const ConservationState& u, const GasModel& gas);

double sound_speed(const ConservationState& u, const GasModel& gas);
double mach_number(const ConservationState& u, const GasModel& gas);

void euler_flux(const ConservationState& u, const GasModel& gas,
                State4<double>& f1, State4<double>& f2);

/// grad[comp][dim] layout. Inviscid models return zero fluxes.
void viscous_flux(const ConservationState& u, const double grad[4][2],
                  const GasModel& gas, State4<double>& e1, State4<double>& e2);

void euler_jacobian(const ConservationState& u, const GasModel& gas,
                    Mat4<double>& a1, Mat4<double>& a2);

/// Blocks with sum_j K[i][j] dU/dx_j = E_i for arbitrary gradients.
void diffusivity_matrices(const ConservationState& u, const GasModel& gas,
                          Mat4<double> k[2][2]);

double pressure_coefficient(double p, const FreeStream& fs,
                            const GasModel& gas);

}  // namespace nefem
