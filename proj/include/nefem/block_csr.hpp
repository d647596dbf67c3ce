#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nefem/error.hpp"

namespace nefem {

/// Sparse matrix of 4x4 blocks in CSR form over block rows. The pattern
/// is fixed at construction (one block row per space-time node); values
/// are rewritten every assembly. Blocks are stored row-major.
class BlockCsr {
 public:
  static constexpr int kB = 4;

  BlockCsr() = default;
  /// pairs = (block row, block col); duplicates allowed, pattern is the
  /// sorted union.
  BlockCsr(int n_block_rows, std::vector<std::pair<int, int>> pairs);

  int n_block_rows() const { return n_block_rows_; }
  int n_rows() const { return n_block_rows_ * kB; }
  std::int64_t n_blocks() const {
    return static_cast<std::int64_t>(col_idx_.size());
  }

  void zero_values();

  /// Index of block (brow, bcol) or -1.
  std::int64_t find_block(int brow, int bcol) const;

  double* block(std::int64_t idx) { return values_.data() + 16 * idx; }
  const double* block(std::int64_t idx) const {
    return values_.data() + 16 * idx;
  }

  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }

  /// y = A x, parallel over block rows (deterministic: each row is an
  /// independent serial accumulation).
  void spmv(const double* x, double* y) const;

 private:
  int n_block_rows_ = 0;
  std::vector<std::int64_t> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Block-Jacobi preconditioner: explicit inverses of the 4x4 diagonal
/// blocks (LU with partial pivoting; near-singular blocks fall back to
/// identity).
class BlockJacobi {
 public:
  void build(const BlockCsr& a);
  void apply(const double* x, double* y) const;
  int n_rows() const { return static_cast<int>(inv_.size() / 16) * 4; }

 private:
  std::vector<double> inv_;
};

}  // namespace nefem
