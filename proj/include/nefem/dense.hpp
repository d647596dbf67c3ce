#pragma once

#include <cstddef>
#include <vector>

#include "nefem/error.hpp"

namespace nefem {

/// Row-major dense matrix, just big enough for curve fitting and the
/// GMRES Hessenberg solve.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

/// Solves A x = b in place by Gaussian elimination with partial pivoting.
/// Throws GeometryError on (numerical) rank deficiency.
std::vector<double> solve_dense(DenseMatrix a, std::vector<double> b);

}  // namespace nefem
