#pragma once

#include <vector>

#include "nefem/block_csr.hpp"

namespace nefem {

struct KrylovConfig {
  int restart = 60;
  double tol = 1e-6;  // relative residual
  int max_iters = 500;
};

struct KrylovResult {
  bool converged = false;
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Restarted GMRES, right-preconditioned with block Jacobi, so the
/// monitored residual is the true one. Serial reductions keep the result
/// independent of the thread count.
KrylovResult gmres(const BlockCsr& a, const BlockJacobi& precond,
                   const std::vector<double>& rhs, std::vector<double>& x,
                   const KrylovConfig& cfg);

/// Contract wrapper: builds the preconditioner, starts from zero and
/// throws SolverError (with the achieved residual) when the tolerance is
/// not met within the iteration budget.
std::vector<double> linear_solve(const BlockCsr& a,
                                 const std::vector<double>& rhs,
                                 const KrylovConfig& cfg);

}  // namespace nefem
