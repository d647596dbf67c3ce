#include "nefem/gmres.hpp"

#include <cmath>
#include <sstream>

namespace nefem {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

KrylovResult gmres(const BlockCsr& a, const BlockJacobi& precond,
                   const std::vector<double>& rhs, std::vector<double>& x,
                   const KrylovConfig& cfg) {
  const std::size_t n = rhs.size();
  x.assign(n, 0.0);
  KrylovResult result;

  const double bnorm = norm(rhs);
  if (bnorm == 0.0) {
    result.converged = true;
    return result;
  }

  const int m = cfg.restart;
  std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
  std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
  std::vector<double> cs(m), sn(m), g(m + 1);
  std::vector<double> z(n), w(n);
  std::vector<double> r = rhs;  // x starts at zero

  double beta = bnorm;
  result.rel_residual = 1.0;

  while (result.iterations < cfg.max_iters) {
    for (double& hij : g) hij = 0.0;
    g[0] = beta;
    const double inv_beta = 1.0 / beta;
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] * inv_beta;

    int j = 0;
    for (; j < m && result.iterations < cfg.max_iters; ++j) {
      precond.apply(v[j].data(), z.data());
      a.spmv(z.data(), w.data());
      for (int i = 0; i <= j; ++i) {
        const double hij = dot(w, v[i]);
        h[i][j] = hij;
        for (std::size_t k = 0; k < n; ++k) w[k] -= hij * v[i][k];
      }
      h[j + 1][j] = norm(w);
      if (h[j + 1][j] > 0.0) {
        const double inv = 1.0 / h[j + 1][j];
        for (std::size_t k = 0; k < n; ++k) v[j + 1][k] = w[k] * inv;
      }
      // Givens updates of column j.
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = t;
      }
      const double denom = std::hypot(h[j][j], h[j + 1][j]);
      if (denom == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else {
        cs[j] = h[j][j] / denom;
        sn[j] = h[j + 1][j] / denom;
      }
      h[j][j] = cs[j] * h[j][j] + sn[j] * h[j + 1][j];
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++result.iterations;
      result.rel_residual = std::abs(g[j + 1]) / bnorm;
      if (result.rel_residual <= cfg.tol) {
        ++j;
        break;
      }
    }

    // y from the triangular system, then x += M^-1 (V y).
    std::vector<double> y(j, 0.0);
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < j; ++k) s -= h[i][k] * y[k];
      y[i] = h[i][i] != 0.0 ? s / h[i][i] : 0.0;
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (int i = 0; i < j; ++i)
      for (std::size_t k = 0; k < n; ++k) w[k] += y[i] * v[i][k];
    precond.apply(w.data(), z.data());
    for (std::size_t k = 0; k < n; ++k) x[k] += z[k];

    // True residual for the restart / exit decision.
    a.spmv(x.data(), w.data());
    for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - w[k];
    beta = norm(r);
    result.rel_residual = beta / bnorm;
    if (result.rel_residual <= cfg.tol) {
      result.converged = true;
      return result;
    }
    if (beta == 0.0) {
      result.converged = true;
      result.rel_residual = 0.0;
      return result;
    }
  }
  result.converged = result.rel_residual <= cfg.tol;
  return result;
}

std::vector<double> linear_solve(const BlockCsr& a,
                                 const std::vector<double>& rhs,
                                 const KrylovConfig& cfg) {
  BlockJacobi precond;
  precond.build(a);
  std::vector<double> x;
  const KrylovResult res = gmres(a, precond, rhs, x, cfg);
  if (!res.converged) {
    std::ostringstream os;
    os << "linear solve stagnated: relative residual " << res.rel_residual
       << " after " << res.iterations << " iterations (tol " << cfg.tol << ")";
    throw SolverError(os.str());
  }
  return x;
}

}  // namespace nefem
