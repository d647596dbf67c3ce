#pragma once

#include "nefem/fluxes.hpp"

namespace nefem {

/// Frozen per-element stabilization parameters for one Newton iteration.
/// The streamline parameter acts as a scalar times the identity.
struct TauParams {
  double tau_supg = 0.0;
  double nu_dc = 0.0;
};

/// Inverse-quadrature-sum streamline parameter
///   tau = [ (2/dt)^2 + (2(|u|+c)/h)^2 + (4 nu/h^2)^2 ]^(-1/2)
/// with nu = max(mu, mu*gamma/Pr)/rho (zero for inviscid models).
double tau_supg(const ConservationState& u, const GasModel& gas, double h,
                double dt);

/// Residual-driven shock-capturing diffusivity. The strong residual and
/// gradient are scaled per equation by free-stream magnitudes
/// diag(rho, rho|u|, rho|u|, rho e); the result is clamped by
/// clamp_factor * (h/2)(|u|+c).
double tau_dc(const State4<double>& strong_residual, const double grad[4][2],
              double h, const FreeStream& fs, const ConservationState& u,
              const GasModel& gas, double clamp_factor = 1.0);

}  // namespace nefem
