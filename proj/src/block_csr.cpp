#include "nefem/block_csr.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "nefem/parallel.hpp"

namespace nefem {

BlockCsr::BlockCsr(int n_block_rows, std::vector<std::pair<int, int>> pairs)
    : n_block_rows_(n_block_rows) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  row_ptr_.assign(n_block_rows_ + 1, 0);
  col_idx_.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    row_ptr_[pairs[i].first + 1]++;
    col_idx_[i] = pairs[i].second;
  }
  for (int r = 0; r < n_block_rows_; ++r) row_ptr_[r + 1] += row_ptr_[r];
  values_.assign(pairs.size() * 16, 0.0);
}

void BlockCsr::zero_values() {
  std::memset(values_.data(), 0, values_.size() * sizeof(double));
}

std::int64_t BlockCsr::find_block(int brow, int bcol) const {
  const auto begin = col_idx_.begin() + row_ptr_[brow];
  const auto end = col_idx_.begin() + row_ptr_[brow + 1];
  const auto it = std::lower_bound(begin, end, bcol);
  if (it == end || *it != bcol) return -1;
  return it - col_idx_.begin();
}

void BlockCsr::spmv(const double* x, double* y) const {
  global_pool().parallel_chunks(
      n_block_rows_, 256, [&](std::size_t r0, std::size_t r1) {
        for (std::size_t br = r0; br < r1; ++br) {
          double acc[4] = {0, 0, 0, 0};
          for (std::int64_t idx = row_ptr_[br]; idx < row_ptr_[br + 1];
               ++idx) {
            const double* b = values_.data() + 16 * idx;
            const double* xb = x + 4 * col_idx_[idx];
            for (int i = 0; i < 4; ++i) {
              acc[i] += b[4 * i + 0] * xb[0] + b[4 * i + 1] * xb[1] +
                        b[4 * i + 2] * xb[2] + b[4 * i + 3] * xb[3];
            }
          }
          double* yb = y + 4 * br;
          for (int i = 0; i < 4; ++i) yb[i] = acc[i];
        }
      });
}

void BlockJacobi::build(const BlockCsr& a) {
  const int n = a.n_block_rows();
  inv_.assign(static_cast<std::size_t>(n) * 16, 0.0);
  for (int br = 0; br < n; ++br) {
    const std::int64_t idx = a.find_block(br, br);
    double m[4][4];
    if (idx < 0) {
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = i == j ? 1.0 : 0.0;
    } else {
      const double* b = a.block(idx);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = b[4 * i + j];
    }
    // Gauss-Jordan with partial pivoting into inv.
    double out[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    bool ok = true;
    for (int k = 0; k < 4 && ok; ++k) {
      int piv = k;
      for (int i = k + 1; i < 4; ++i)
        if (std::abs(m[i][k]) > std::abs(m[piv][k])) piv = i;
      if (std::abs(m[piv][k]) < 1e-300) {
        ok = false;
        break;
      }
      if (piv != k) {
        for (int j = 0; j < 4; ++j) {
          std::swap(m[k][j], m[piv][j]);
          std::swap(out[k][j], out[piv][j]);
        }
      }
      const double inv_p = 1.0 / m[k][k];
      for (int j = 0; j < 4; ++j) {
        m[k][j] *= inv_p;
        out[k][j] *= inv_p;
      }
      for (int i = 0; i < 4; ++i) {
        if (i == k) continue;
        const double f = m[i][k];
        if (f == 0.0) continue;
        for (int j = 0; j < 4; ++j) {
          m[i][j] -= f * m[k][j];
          out[i][j] -= f * out[k][j];
        }
      }
    }
    double* dst = inv_.data() + static_cast<std::size_t>(br) * 16;
    if (!ok) {
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) dst[4 * i + j] = i == j ? 1.0 : 0.0;
    } else {
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) dst[4 * i + j] = out[i][j];
    }
  }
}

void BlockJacobi::apply(const double* x, double* y) const {
  const std::size_t n = inv_.size() / 16;
  for (std::size_t br = 0; br < n; ++br) {
    const double* b = inv_.data() + br * 16;
    const double* xb = x + 4 * br;
    double* yb = y + 4 * br;
    for (int i = 0; i < 4; ++i) {
      yb[i] = b[4 * i + 0] * xb[0] + b[4 * i + 1] * xb[1] +
              b[4 * i + 2] * xb[2] + b[4 * i + 3] * xb[3];
    }
  }
}

}  // namespace nefem
