#include "nefem/march.hpp"

#include <algorithm>
#include <cmath>

namespace nefem {

WallForces RunState::settled_drag() const {
  WallForces out;
  if (history.empty()) return out;
  const std::size_t n = history.size();
  const std::size_t begin = n - std::max<std::size_t>(1, n / 5);
  for (std::size_t i = begin; i < n; ++i) {
    out.cd_pressure += history[i].cd_pressure;
    out.cd_viscous += history[i].cd_viscous;
  }
  const double inv = 1.0 / static_cast<double>(n - begin);
  out.cd_pressure *= inv;
  out.cd_viscous *= inv;
  return out;
}

RunState march(const SlabSystem& sys, const CompressibleLaw& law,
               const FreeStream& fs, const SolverConfig& cfg,
               std::ostream* log, const SlabCallback& on_slab) {
  RunState rs;
  const int n = sys.n_nodes();
  rs.top.resize(4 * n);
  const ConservationState u0 = fs.state();
  for (int i = 0; i < n; ++i) {
    rs.top[i * 4 + 0] = u0.rho;
    rs.top[i * 4 + 1] = u0.mx;
    rs.top[i * 4 + 2] = u0.my;
    rs.top[i * 4 + 3] = u0.E;
  }

  BlockCsr mat = sys.create_matrix();
  std::vector<double> u, new_top;
  const TermFlags terms;
  double dt = cfg.dt0;

  for (int k = 0; k < cfg.max_slabs; ++k) {
    double dt_try = dt;
    NewtonReport rep;
    bool ok = false;
    std::string last_error;
    for (int attempt = 0; attempt <= cfg.retry_halvings; ++attempt) {
      SpaceTimeSlab slab{rs.time, dt_try, &rs.top};
      sys.init_unknowns(rs.top, u);
      // Stabilization parameters are frozen over the whole slab solve
      // (computed from the previous top trace), which keeps the Newton
      // iteration quadratic; they re-adapt between slabs.
      const auto taus = sys.build_tau_table(law, fs, slab, u, cfg.supg_enabled,
                                            cfg.dc_enabled, cfg.dc_clamp);
      auto tau_fn = [&](const std::vector<double>&) { return taus; };
      auto valid_fn = [&](const std::vector<double>& uv) {
        return sys.states_valid(law, uv);
      };
      try {
        rep = newton_solve(sys, law, slab, tau_fn, valid_fn, terms, u, mat,
                           cfg, log, "slab " + std::to_string(k));
        ok = true;
        break;
      } catch (const Error& e) {
        last_error = e.what();
        if (log)
          *log << "slab " << k << " failed (dt " << dt_try << "): " << e.what()
               << "\n";
        dt_try *= 0.5;
      }
    }
    if (!ok) {
      rs.failed = true;
      rs.failure = "slab " + std::to_string(k) + " failed after " +
                   std::to_string(cfg.retry_halvings) + " dt halvings: " +
                   last_error;
      return rs;
    }

    sys.extract_top(u, new_top);
    double dn = 0.0, dd = 0.0;
    for (std::size_t i = 0; i < new_top.size(); ++i) {
      const double d = new_top[i] - rs.top[i];
      dn += d * d;
      dd += rs.top[i] * rs.top[i];
    }
    const double steady_delta = std::sqrt(dn) / std::max(std::sqrt(dd), 1e-300);

    rs.top.swap(new_top);
    rs.time += dt_try;
    rs.slabs_completed = k + 1;
    rs.total_newton += rep.iterations;
    rs.total_krylov += rep.krylov_iterations;

    SlabRecord rec;
    rec.slab = k;
    rec.t_end = rs.time;
    rec.dt = dt_try;
    rec.newton_iters = rep.iterations;
    rec.krylov_iters = rep.krylov_iterations;
    rec.r0 = rep.r0;
    rec.r_final = rep.r_final;
    const WallForces wf =
        wall_forces(sys.geometry(), sys.mode(), rs.top, fs, law.gas);
    rec.cd_pressure = wf.cd_pressure;
    rec.cd_viscous = wf.cd_viscous;
    rec.steady_delta = steady_delta;
    rs.history.push_back(rec);
    if (on_slab) on_slab(rs, rec);

    if (steady_delta < cfg.steady_tol) {
      rs.steady = true;
      break;
    }
    dt = std::min(dt_try * cfg.dt_growth, cfg.dt_max);
  }
  return rs;
}

}  // namespace nefem
