#pragma once

#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "nefem/gmres.hpp"
#include "nefem/slab_system.hpp"

namespace nefem {

struct SolverConfig {
  // Newton
  double newton_tol = 1e-8;      // relative residual
  double newton_abs_tol = 1e-12;
  int max_newton = 20;
  int line_search_max = 8;
  KrylovConfig krylov{60, 1e-6, 500};
  // Slab marching
  double dt0 = 0.05;
  double dt_growth = 1.2;
  double dt_max = 1.0;
  int max_slabs = 200;
  double steady_tol = 1e-8;
  int retry_halvings = 3;
  // Stabilization switches
  bool supg_enabled = true;
  bool dc_enabled = true;
  double dc_clamp = 1.0;
  // Execution
  bool deterministic = true;
  int threads = 0;
  SlabQuadrature quadrature{};
};

struct NewtonReport {
  int iterations = 0;
  int krylov_iterations = 0;
  double r0 = 0.0;
  double r_final = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
};

inline double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Newton iteration on one slab with an exact tangent (stabilization
/// parameters frozen per iterate) and a halving line search on the true
/// residual norm. Invalid thermodynamic states along the way count as
/// rejected steps. Throws SolverError when the iteration or the Krylov
/// solver gives out.
template <class Law, class TauFn, class ValidFn>
NewtonReport newton_solve(const SlabSystem& sys, const Law& law,
                          const SpaceTimeSlab& slab, const TauFn& tau_fn,
                          const ValidFn& valid_fn, const TermFlags& terms,
                          std::vector<double>& u, BlockCsr& mat,
                          const SolverConfig& cfg, std::ostream* log = nullptr,
                          const std::string& label = "") {
  NewtonReport rep;
  sys.enforce_constraints(u);

  std::vector<double> r, du, u_trial, r_trial;
  std::vector<TauParams> taus = tau_fn(u);
  sys.assemble_residual(law, slab, u, taus, terms, r);
  sys.constrain_residual(u, r);
  double rnorm = l2_norm(r);
  rep.r0 = rnorm;
  rep.residual_history.push_back(rnorm);
  if (log) *log << label << " newton 0 ||R|| " << rnorm << "\n";

  const auto done = [&](double rn) {
    return rn <= std::max(cfg.newton_tol * rep.r0, cfg.newton_abs_tol);
  };
  if (done(rnorm)) {
    rep.converged = true;
    rep.r_final = rnorm;
    return rep;
  }

  BlockJacobi precond;
  for (int it = 1; it <= cfg.max_newton; ++it) {
    sys.assemble_tangent(law, slab, u, taus, terms, mat);
    sys.constrain_matrix(mat);
    precond.build(mat);

    std::vector<double> rhs(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
    const KrylovResult kres = gmres(mat, precond, rhs, du, cfg.krylov);
    rep.krylov_iterations += kres.iterations;
    if (!kres.converged && kres.rel_residual > 1e-2) {
      throw SolverError("Krylov stagnation: relative residual " +
                        std::to_string(kres.rel_residual) + " after " +
                        std::to_string(kres.iterations) + " iterations");
    }

    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < cfg.line_search_max; ++ls, alpha *= 0.5) {
      u_trial = u;
      sys.apply_update(u_trial, du, alpha);
      if (!valid_fn(u_trial)) continue;
      std::vector<TauParams> taus_trial;
      try {
        taus_trial = tau_fn(u_trial);
        sys.assemble_residual(law, slab, u_trial, taus_trial, terms, r_trial);
      } catch (const StateError&) {
        continue;  // quadrature-point state failure: halve the step
      }
      sys.constrain_residual(u_trial, r_trial);
      const double rt = l2_norm(r_trial);
      if (rt <= rnorm || done(rt)) {
        u.swap(u_trial);
        r.swap(r_trial);
        taus.swap(taus_trial);
        rnorm = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw SolverError("Newton line search failed at ||R|| = " +
                        std::to_string(rnorm));

    rep.iterations = it;
    rep.residual_history.push_back(rnorm);
    if (log) *log << label << " newton " << it << " ||R|| " << rnorm << "\n";
    if (done(rnorm)) {
      rep.converged = true;
      break;
    }
  }
  rep.r_final = rnorm;
  if (!rep.converged)
    throw SolverError("Newton did not converge in " +
                      std::to_string(cfg.max_newton) + " iterations (||R|| " +
                      std::to_string(rnorm) + ", ||R0|| " +
                      std::to_string(rep.r0) + ")");
  return rep;
}

}  // namespace nefem
