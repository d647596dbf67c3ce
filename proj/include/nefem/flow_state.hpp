#pragma once

#include <array>
#include <cmath>

#include "nefem/error.hpp"

namespace nefem {

/// Solution components per node: density, momentum, total energy per
/// volume.
template <class T>
using State4 = std::array<T, 4>;

template <class T>
using Mat4 = std::array<std::array<T, 4>, 4>;

/// Calorically perfect gas with constant viscosity (Stokes hypothesis)
/// and constant Prandtl number.
struct GasModel {
  double gamma = 1.4;
  double mu = 0.0;
  double prandtl = 0.72;
  bool inviscid = true;
};

struct ConservationState {
  double rho = 1.0;
  double mx = 0.0;
  double my = 0.0;
  double E = 1.0;

  State4<double> as_array() const { return {rho, mx, my, E}; }
  static ConservationState from_array(const State4<double>& u) {
    return {u[0], u[1], u[2], u[3]};
  }
  static ConservationState from_primitive(double rho, double u, double v,
                                          double e_total) {
    return {rho, rho * u, rho * v, rho * e_total};
  }
};

/// Far-field reference state in the nondimensional units of the case
/// tables (rho, velocity, total energy per unit mass).
struct FreeStream {
  double rho = 1.0;
  double u = 1.0;
  double v = 0.0;
  double e = 1.0;
  double lref = 1.0;

  double speed() const { return std::sqrt(u * u + v * v); }
  ConservationState state() const {
    return ConservationState::from_primitive(rho, u, v, e);
  }
  double pressure(const GasModel& gas) const {
    return (gas.gamma - 1.0) * rho * (e - 0.5 * (u * u + v * v));
  }
  double mach(const GasModel& gas) const {
    return speed() / std::sqrt(gas.gamma * pressure(gas) / rho);
  }
  double dynamic_head() const { return 0.5 * rho * speed() * speed(); }
  double reynolds(const GasModel& gas) const {
    return gas.inviscid || gas.mu <= 0.0
               ? 0.0
               : rho * speed() * lref / gas.mu;
  }
};

inline bool valid_state(const State4<double>& u, const GasModel& gas) {
  if (!(u[0] > 0.0)) return false;
  const double p =
      (gas.gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0]);
  return p > 0.0 && std::isfinite(p);
}

}  // namespace nefem
