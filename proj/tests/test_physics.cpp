#include <doctest.h>

#include <cmath>
#include <random>

#include "nefem/fluxes.hpp"
#include "nefem/wall_forces.hpp"
#include "test_support.hpp"

using namespace nefem;
using namespace nefem::test;

namespace {

const GasModel kAir{1.4, 0.0, 0.72, true};

ConservationState cylinder_inflow() {
  return ConservationState::from_primitive(1.0, 1.0, 0.0, 1.1179);
}
ConservationState airfoil_inflow() {
  return ConservationState::from_primitive(1.0, 1.0, 0.0, 3.29);
}

std::mt19937& rng() {
  static std::mt19937 gen(12345);
  return gen;
}

ConservationState random_state() {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double rho = 0.4 + 1.8 * std::abs(u(rng()));
  const double vx = 1.6 * u(rng());
  const double vy = 1.6 * u(rng());
  const double p = 0.2 + 2.0 * std::abs(u(rng()));
  const double e = p / ((kAir.gamma - 1.0) * rho) + 0.5 * (vx * vx + vy * vy);
  return ConservationState::from_primitive(rho, vx, vy, e);
}

}  // namespace

TEST_CASE("pressure: benchmark inflow states and failure modes") {
  // Cylinder table: p = 0.4 * (1.1179 - 0.5).
  CHECK(pressure(cylinder_inflow(), kAir) ==
        doctest::Approx(0.24716).epsilon(1e-12));
  // Resting gas with e = 2.5: p = 1.
  CHECK(pressure(ConservationState::from_primitive(1, 0, 0, 2.5), kAir) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // Airfoil table: p = 0.4 * (3.29 - 0.5).
  CHECK(pressure(airfoil_inflow(), kAir) ==
        doctest::Approx(1.116).epsilon(1e-12));

  CHECK_THROWS_AS(pressure({1.0, 0, 0, -1.0}, kAir), StateError);
  CHECK_THROWS_AS(pressure({-1.0, 0, 0, 1.0}, kAir), StateError);
}

TEST_CASE("mach number cross-checks fix the ideal gas with gamma = 1.4") {
  CHECK(mach_number(cylinder_inflow(), kAir) ==
        doctest::Approx(1.7).epsilon(1e-3));
  CHECK(mach_number(airfoil_inflow(), kAir) ==
        doctest::Approx(0.8).epsilon(2e-3));
  CHECK(mach_number(ConservationState::from_primitive(1, 0, 0, 2.5), kAir) ==
        0.0);
}

TEST_CASE("EOS round trip: primitive -> conservation -> primitive") {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const ConservationState s = random_state();
    const double rho = s.rho, vx = s.mx / s.rho, vy = s.my / s.rho;
    const double e = s.E / s.rho;
    const ConservationState back =
        ConservationState::from_primitive(rho, vx, vy, e);
    CHECK(back.rho == doctest::Approx(s.rho).epsilon(1e-13));
    CHECK(back.mx == doctest::Approx(s.mx).epsilon(1e-13));
    CHECK(back.my == doctest::Approx(s.my).epsilon(1e-13));
    CHECK(back.E == doctest::Approx(s.E).epsilon(1e-13));
  }
}

TEST_CASE("euler flux: static gas, table values, rotation equivariance") {
  State4<double> f1, f2;
  const auto still = ConservationState::from_primitive(1, 0, 0, 2.5);
  euler_flux(still, kAir, f1, f2);
  const double p = pressure(still, kAir);
  CHECK(f1[0] == 0.0);
  CHECK(f1[1] == doctest::Approx(p).epsilon(1e-14));
  CHECK(f1[2] == 0.0);
  CHECK(f1[3] == 0.0);

  euler_flux(cylinder_inflow(), kAir, f1, f2);
  CHECK(f1[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f1[1] == doctest::Approx(1.24716).epsilon(1e-12));
  CHECK(f1[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f1[3] == doctest::Approx(1.36506).epsilon(1e-10));

  // Rotating the state by 90 degrees rotates the flux tensor: mass and
  // energy rows like vectors, the momentum block like a rank-2 tensor.
  for (int k = 0; k < 20; ++k) {
    const ConservationState s = random_state();
    const ConservationState r{s.rho, -s.my, s.mx, s.E};
    State4<double> g1, g2, h1, h2;
    euler_flux(s, kAir, g1, g2);
    euler_flux(r, kAir, h1, h2);
    // Rows 0 and 3: (h1, h2)[row] = Q (g1, g2)[row] with Q = 90 deg CCW.
    for (int row : {0, 3}) {
      CHECK(h1[row] == doctest::Approx(-g2[row]).epsilon(1e-12));
      CHECK(h2[row] == doctest::Approx(g1[row]).epsilon(1e-12));
    }
    // Momentum block M'(i,j) = (Q M Q^T)(i,j), M(i,j) = flux_j[1+i].
    const double m[2][2] = {{g1[1], g2[1]}, {g1[2], g2[2]}};
    const double mp[2][2] = {{h1[1], h2[1]}, {h1[2], h2[2]}};
    CHECK(mp[0][0] == doctest::Approx(m[1][1]).epsilon(1e-12));
    CHECK(mp[0][1] == doctest::Approx(-m[1][0]).epsilon(1e-12));
    CHECK(mp[1][0] == doctest::Approx(-m[0][1]).epsilon(1e-12));
    CHECK(mp[1][1] == doctest::Approx(m[0][0]).epsilon(1e-12));
  }
}

TEST_CASE("viscous flux: zeros, pure shear, primitive-gradient oracle") {
  GasModel gas{1.4, 1.0, 0.72, false};
  State4<double> e1, e2;
  const double zero_grad[4][2] = {};
  viscous_flux(ConservationState::from_primitive(1, 0.3, -0.2, 2.5), zero_grad,
               gas, e1, e2);
  for (int c = 0; c < 4; ++c) {
    CHECK(e1[c] == 0.0);
    CHECK(e2[c] == 0.0);
  }

  // Pure shear du/dy = 1 at a zero-velocity point: tau12 = tau21 = mu.
  const double shear_grad[4][2] = {{0, 0}, {0, 1}, {0, 0}, {0, 0}};
  viscous_flux(ConservationState::from_primitive(1, 0, 0, 2.5), shear_grad,
               gas, e1, e2);
  CHECK(e1[1] == doctest::Approx(0.0).epsilon(1e-14));  // tau11
  CHECK(e1[2] == doctest::Approx(1.0).epsilon(1e-14));  // tau12
  CHECK(e2[1] == doctest::Approx(1.0).epsilon(1e-14));  // tau21
  CHECK(e2[2] == doctest::Approx(0.0).epsilon(1e-14));  // tau22

  // Inviscid model returns zero fluxes.
  viscous_flux(cylinder_inflow(), shear_grad, kAir, e1, e2);
  CHECK(e1[2] == 0.0);

  // Oracle built from primitive-variable fields: pick random primitive
  // values and gradients, push them to conservation variables by the
  // (exact) product rule, and compare against the direct stress formula.
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double rho = 0.7 + 0.6 * std::abs(u(rng()));
    const double vx = u(rng()), vy = u(rng());
    const double eint = 1.5 + std::abs(u(rng()));
    double d_rho[2], d_vx[2], d_vy[2], d_eint[2];
    for (int d = 0; d < 2; ++d) {
      d_rho[d] = u(rng());
      d_vx[d] = u(rng());
      d_vy[d] = u(rng());
      d_eint[d] = u(rng());
    }
    // Conservation state and gradients.
    const double e_tot = eint + 0.5 * (vx * vx + vy * vy);
    const ConservationState s =
        ConservationState::from_primitive(rho, vx, vy, e_tot);
    double grad[4][2];
    for (int d = 0; d < 2; ++d) {
      const double d_etot =
          d_eint[d] + vx * d_vx[d] + vy * d_vy[d];
      grad[0][d] = d_rho[d];
      grad[1][d] = rho * d_vx[d] + vx * d_rho[d];
      grad[2][d] = rho * d_vy[d] + vy * d_rho[d];
      grad[3][d] = rho * d_etot + e_tot * d_rho[d];
    }
    viscous_flux(s, grad, gas, e1, e2);

    const double mu = gas.mu;
    const double t11 = mu * ((4.0 / 3.0) * d_vx[0] - (2.0 / 3.0) * d_vy[1]);
    const double t22 = mu * ((4.0 / 3.0) * d_vy[1] - (2.0 / 3.0) * d_vx[0]);
    const double t12 = mu * (d_vx[1] + d_vy[0]);
    const double kappa = mu * gas.gamma / (gas.prandtl * (gas.gamma - 1.0));
    CHECK(e1[1] == doctest::Approx(t11).epsilon(1e-8));
    CHECK(e1[2] == doctest::Approx(t12).epsilon(1e-8));
    CHECK(e2[1] == doctest::Approx(t12).epsilon(1e-8));
    CHECK(e2[2] == doctest::Approx(t22).epsilon(1e-8));
    CHECK(e1[3] ==
          doctest::Approx(kappa * d_eint[0] + t11 * vx + t12 * vy)
              .epsilon(1e-8));
    CHECK(e2[3] ==
          doctest::Approx(kappa * d_eint[1] + t12 * vx + t22 * vy)
              .epsilon(1e-8));
  }
}

TEST_CASE("euler jacobians: homogeneity, finite differences, static row") {
  Mat4<double> a1, a2;
  for (int k = 0; k < 100; ++k) {
    const ConservationState s = random_state();
    euler_jacobian(s, kAir, a1, a2);
    State4<double> f1, f2;
    euler_flux(s, kAir, f1, f2);
    const State4<double> uv = s.as_array();
    for (int i = 0; i < 4; ++i) {
      double s1 = 0.0, s2 = 0.0;
      for (int j = 0; j < 4; ++j) {
        s1 += a1[i][j] * uv[j];
        s2 += a2[i][j] * uv[j];
      }
      CHECK(s1 == doctest::Approx(f1[i]).epsilon(1e-12));
      CHECK(s2 == doctest::Approx(f2[i]).epsilon(1e-12));
    }
  }

  // Finite differences of the flux.
  for (int k = 0; k < 25; ++k) {
    const ConservationState s = random_state();
    euler_jacobian(s, kAir, a1, a2);
    const double h = 1e-7;
    for (int j = 0; j < 4; ++j) {
      State4<double> up = s.as_array(), dn = s.as_array();
      const double dh = h * (1.0 + std::abs(up[j]));
      up[j] += dh;
      dn[j] -= dh;
      State4<double> f1p, f2p, f1m, f2m;
      euler_flux(ConservationState::from_array(up), kAir, f1p, f2p);
      euler_flux(ConservationState::from_array(dn), kAir, f1m, f2m);
      for (int i = 0; i < 4; ++i) {
        const double fd1 = (f1p[i] - f1m[i]) / (2 * dh);
        const double fd2 = (f2p[i] - f2m[i]) / (2 * dh);
        CHECK(a1[i][j] == doctest::Approx(fd1).epsilon(1e-6));
        CHECK(a2[i][j] == doctest::Approx(fd2).epsilon(1e-6));
      }
    }
  }

  euler_jacobian(ConservationState::from_primitive(1, 0, 0, 2.5), kAir, a1, a2);
  CHECK(a1[0][0] == 0.0);
  CHECK(a1[0][1] == 1.0);
  CHECK(a1[0][2] == 0.0);
  CHECK(a1[0][3] == 0.0);
}

TEST_CASE("diffusivity matrices satisfy the viscous-flux contract") {
  GasModel gas{1.4, 0.023, 0.72, false};
  Mat4<double> k[2][2];
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int it = 0; it < 100; ++it) {
    const ConservationState s = random_state();
    double grad[4][2];
    for (int c = 0; c < 4; ++c)
      for (int d = 0; d < 2; ++d) grad[c][d] = u(rng());
    diffusivity_matrices(s, gas, k);
    State4<double> e1, e2;
    viscous_flux(s, grad, gas, e1, e2);
    for (int i = 0; i < 2; ++i) {
      for (int row = 0; row < 4; ++row) {
        double acc = 0.0;
        for (int col = 0; col < 4; ++col)
          acc += k[i][0][row][col] * grad[col][0] +
                 k[i][1][row][col] * grad[col][1];
        const double expect = i == 0 ? e1[row] : e2[row];
        CHECK(acc == doctest::Approx(expect).epsilon(1e-10));
      }
    }
    // No mass diffusion.
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int col = 0; col < 4; ++col) CHECK(k[i][j][0][col] == 0.0);
  }
  // Inviscid: all blocks zero.
  diffusivity_matrices(random_state(), kAir, k);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(k[i][j][r][c] == 0.0);
}

TEST_CASE("pressure coefficient: zero point, stagnation and sonic oracles") {
  FreeStream fs{1.0, 1.0, 0.0, 1.1179, 1.0};
  CHECK(pressure_coefficient(fs.pressure(kAir), fs, kAir) == 0.0);

  // Pitot oracle: normal shock at M = 1.7, then isentropic compression.
  const double g = 1.4, m = 1.7, m2 = m * m;
  const double p0_ratio =
      std::pow(0.5 * (g + 1.0) * m2, g / (g - 1.0)) /
      std::pow(2.0 * g * m2 / (g + 1.0) - (g - 1.0) / (g + 1.0),
               1.0 / (g - 1.0));
  const double cp_stag =
      (p0_ratio - 1.0) * fs.pressure(kAir) / fs.dynamic_head();
  CHECK(cp_stag == doctest::Approx(1.594).epsilon(1e-3));
  CHECK(pressure_coefficient(p0_ratio * fs.pressure(kAir), fs, kAir) ==
        doctest::Approx(cp_stag).epsilon(1e-13));

  // Critical (sonic) pressure coefficient at M = 0.8.
  FreeStream fs8{1.0, 1.0, 0.0, 3.29, 1.0};
  const double m8 = fs8.mach(kAir);
  const double p_crit_ratio = std::pow(
      (1.0 + 0.5 * (g - 1.0) * m8 * m8) / (1.0 + 0.5 * (g - 1.0)),
      g / (g - 1.0));
  const double cp_crit = pressure_coefficient(
      p_crit_ratio * fs8.pressure(kAir), fs8, kAir);
  CHECK(cp_crit == doctest::Approx(-0.435).epsilon(2e-3));

  // Frame sanity: shifting total energy everywhere leaves Cp unchanged.
  FreeStream shifted = fs;
  shifted.e += 2.0;
  const double p_probe = 0.31;
  const double dp = (kAir.gamma - 1.0) * fs.rho * 2.0;
  CHECK(pressure_coefficient(p_probe + dp, shifted, kAir) ==
        doctest::Approx(pressure_coefficient(p_probe, fs, kAir))
            .epsilon(1e-12));

  CHECK_THROWS_AS(pressure_coefficient(1.0, FreeStream{1, 0, 0, 2.5, 1}, kAir),
                  StateError);
}

TEST_CASE("wall drag: closed-contour null results and trigonometric oracle") {
  const Mesh mesh = load_mesh("data/cylinder_g0.mesh");
  const CurveSet curves = read_curves("data/cylinder.nurbs");
  const CaseGeometry geom =
      CaseGeometry::build(mesh, curves, std::map<int, int>{{0, 0}});
  FreeStream fs{1.0, std::sqrt(2.0), 0.0, 3.0, 1.0};  // dynamic head = 1

  // Uniform free stream: closed-contour pressure integral vanishes.
  std::vector<double> nodal(geom.mesh.n_nodes() * 4);
  const ConservationState u0 = fs.state();
  for (int i = 0; i < geom.mesh.n_nodes(); ++i) {
    nodal[i * 4 + 0] = u0.rho;
    nodal[i * 4 + 1] = u0.mx;
    nodal[i * 4 + 2] = u0.my;
    nodal[i * 4 + 3] = u0.E;
  }
  GasModel viscous_gas{1.4, 1e-3, 0.72, false};
  for (Mode mode : {Mode::Nefem, Mode::Sfem}) {
    const WallForces wf = wall_forces(geom, mode, nodal, fs, viscous_gas);
    CHECK(std::abs(wf.cd_pressure) < 1e-10);
    CHECK(std::abs(wf.cd_viscous) < 1e-10);
  }

  // Constant pressure on the exact circle: zero by the divergence theorem.
  const Vec2 const_p = wall_vector_integral(
      geom, Mode::Nefem, [](Vec2, Vec2 n) { return n; });
  CHECK(std::abs(const_p.x) < 1e-12);
  CHECK(std::abs(const_p.y) < 1e-12);

  // p(theta) = cos(theta) on the circle of radius 1/2. With the outward
  // normal pointing into the solid, n_x = -cos(theta), so the x integral
  // is -pi r.
  const Vec2 trig = wall_vector_integral(geom, Mode::Nefem, [](Vec2 x, Vec2 n) {
    const double theta = std::atan2(x.y, x.x);
    return std::cos(theta) * n;
  });
  CHECK(trig.x == doctest::Approx(-M_PI * 0.5).epsilon(1e-8));
  CHECK(std::abs(trig.y) < 1e-9);
}

TEST_CASE("wall samples: ordering and angle convention") {
  const Mesh mesh = load_mesh("data/cylinder_g0.mesh");
  const CurveSet curves = read_curves("data/cylinder.nurbs");
  const CaseGeometry geom =
      CaseGeometry::build(mesh, curves, std::map<int, int>{{0, 0}});
  FreeStream fs{1.0, 1.0, 0.0, 1.1179, 1.0};
  std::vector<double> nodal(geom.mesh.n_nodes() * 4);
  const ConservationState u0 = fs.state();
  for (int i = 0; i < geom.mesh.n_nodes(); ++i) {
    nodal[i * 4 + 0] = u0.rho;
    nodal[i * 4 + 1] = u0.mx;
    nodal[i * 4 + 2] = u0.my;
    nodal[i * 4 + 3] = u0.E;
  }
  const auto samples = wall_samples(geom, Mode::Nefem, nodal, fs, kAir,
                                    WallCoordinate::ThetaDegrees);
  REQUIRE(samples.size() == 64);
  for (std::size_t i = 1; i < samples.size(); ++i)
    CHECK(samples[i].arc > samples[i - 1].arc);
  CHECK(samples.front().arc >= 0.0);
  CHECK(samples.back().arc < 360.0);
  // theta = 0 is the upstream stagnation direction (-x axis).
  const Vec2 front = geom.mesh.nodes[samples.front().node];
  CHECK(front.x == doctest::Approx(-0.5).epsilon(1e-12));
  for (const auto& s : samples) CHECK(std::abs(s.cp) < 1e-12);
}
