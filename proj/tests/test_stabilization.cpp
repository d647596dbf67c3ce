#include <doctest.h>

#include <cmath>

#include "nefem/stabilization.hpp"

using namespace nefem;

namespace {
const GasModel kInviscid{1.4, 0.0, 0.72, true};
const ConservationState kInflow =
    ConservationState::from_primitive(1.0, 1.0, 0.0, 1.1179);
}  // namespace

TEST_CASE("streamline parameter: advective limit and time-step bound") {
  // dt -> infinity: tau = h / (2 (|u|+c)).
  const double h = 0.02;
  const double speed = 1.0 + sound_speed(kInflow, kInviscid);
  const double tau_inf = tau_supg(kInflow, kInviscid, h, 1e12);
  CHECK(tau_inf == doctest::Approx(h / (2.0 * speed)).epsilon(1e-9));

  // tau <= dt/2 for any input.
  for (double dt : {1e-4, 1e-2, 1.0, 100.0}) {
    for (double hh : {1e-3, 0.1, 10.0}) {
      CHECK(tau_supg(kInflow, kInviscid, hh, dt) <= dt / 2.0 + 1e-15);
    }
  }
}

TEST_CASE("streamline parameter: direct arithmetic oracle") {
  const double h = 0.01, dt = 0.01;
  const double c = sound_speed(kInflow, kInviscid);
  const double expect =
      1.0 / std::sqrt(std::pow(2.0 / dt, 2) +
                      std::pow(2.0 * (1.0 + c) / h, 2));
  CHECK(tau_supg(kInflow, kInviscid, h, dt) ==
        doctest::Approx(expect).epsilon(1e-14));

  // Viscous contribution enters through max(mu, mu*gamma/Pr)/rho.
  GasModel viscous{1.4, 0.05, 0.72, false};
  const double nu = std::max(viscous.mu, viscous.mu * viscous.gamma /
                                             viscous.prandtl) /
                    kInflow.rho;
  const double expect_v =
      1.0 / std::sqrt(std::pow(2.0 / dt, 2) +
                      std::pow(2.0 * (1.0 + c) / h, 2) +
                      std::pow(4.0 * nu / (h * h), 2));
  CHECK(tau_supg(kInflow, viscous, h, dt) ==
        doctest::Approx(expect_v).epsilon(1e-14));
}

TEST_CASE("streamline parameter: advective-limit scaling in h") {
  const double tau1 = tau_supg(kInflow, kInviscid, 0.01, 1e12);
  const double tau2 = tau_supg(kInflow, kInviscid, 0.02, 1e12);
  CHECK(tau2 == doctest::Approx(2.0 * tau1).epsilon(1e-9));
}

TEST_CASE("shock-capturing parameter: zero residual, clamp, direct formula") {
  FreeStream fs{1.0, 1.0, 0.0, 1.1179, 1.0};
  const double h = 0.05;
  const double zero_grad[4][2] = {};

  CHECK(tau_dc({0, 0, 0, 0}, zero_grad, h, fs, kInflow, kInviscid) == 0.0);

  // Clamp: huge residual against a tiny gradient.
  const double nu_max =
      0.5 * h * (1.0 + sound_speed(kInflow, kInviscid));
  double tiny_grad[4][2] = {};
  tiny_grad[0][0] = 1e-9;
  CHECK(tau_dc({100, 100, 100, 100}, tiny_grad, h, fs, kInflow, kInviscid) ==
        doctest::Approx(nu_max).epsilon(1e-13));
  CHECK(tau_dc({100, 100, 100, 100}, tiny_grad, h, fs, kInflow, kInviscid,
               0.5) == doctest::Approx(0.5 * nu_max).epsilon(1e-13));

  // Hand-evaluated formula on synthetic inputs.
  const State4<double> res = {0.3, -0.1, 0.2, 0.5};
  double grad[4][2] = {{1.0, -0.5}, {0.2, 0.1}, {-0.3, 0.4}, {0.6, -0.2}};
  const State4<double> scale = {fs.rho, fs.rho * fs.speed(),
                                fs.rho * fs.speed(), fs.rho * fs.e};
  double rs = 0.0, gs = 0.0;
  for (int c = 0; c < 4; ++c) {
    rs += (res[c] / scale[c]) * (res[c] / scale[c]);
    for (int d = 0; d < 2; ++d)
      gs += (grad[c][d] / scale[c]) * (grad[c][d] / scale[c]);
  }
  const double expect =
      std::min(0.5 * h * std::sqrt(rs) / std::sqrt(gs), nu_max);
  CHECK(tau_dc(res, grad, h, fs, kInflow, kInviscid) ==
        doctest::Approx(expect).epsilon(1e-13));

  // Clamp scales linearly with h in the advective regime.
  CHECK(tau_dc({100, 100, 100, 100}, tiny_grad, 2.0 * h, fs, kInflow,
               kInviscid) == doctest::Approx(2.0 * nu_max).epsilon(1e-12));
}
