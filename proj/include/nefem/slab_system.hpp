#pragma once

#include <atomic>
#include <map>
#include <mutex>
#include <vector>

#include "nefem/block_csr.hpp"
#include "nefem/classify.hpp"
#include "nefem/conservation_laws.hpp"
#include "nefem/element_kernel.hpp"
#include "nefem/parallel.hpp"

namespace nefem {

/// Boundary-enhanced elements on wall triangles, or plain straight-edge
/// elements everywhere (the comparison baseline reuses the same nodes).
enum class Mode { Nefem, Sfem };

struct SlabQuadrature {
  int standard_order = 3;  // symmetric triangle rule
  int nefem_points = 5;    // collapsed tensor rule, points per direction
};

/// Assembler for one spatial mesh: element caches, sparsity, Dirichlet
/// constraints (with wall-normal frames at slip nodes), and the scatter
/// of element kernels into the global space-time system. Unknown vectors
/// hold 2 layers x 4 components per node; slip nodes store momentum in
/// the (normal, tangential) frame so the normal component is a plain
/// Dirichlet unknown.
class SlabSystem {
 public:
  SlabSystem(const CaseGeometry& geom, Mode mode,
             std::map<int, BoundaryCondition> bcs, SlabQuadrature quad = {});

  int n_nodes() const { return n_nodes_; }
  int n_dofs() const { return 8 * n_nodes_; }
  Mode mode() const { return mode_; }
  const CaseGeometry& geometry() const { return *geom_; }
  const std::vector<ElementCache>& elements() const { return elements_; }
  const std::vector<QuadPoint>& quad_points() const { return qpts_; }

  BlockCsr create_matrix() const { return prototype_; }

  /// Slip-node frame (unit wall normal), if any.
  bool node_has_frame(int node) const { return frame_of_[node] >= 0; }
  Vec2 node_frame(int node) const { return frames_[frame_of_[node]]; }

  // ---- solution-vector helpers -------------------------------------------
  /// Copies a physical nodal field to both layers of the unknown vector
  /// (rotating into slip frames) and enforces the constraints.
  void init_unknowns(const std::vector<double>& nodal,
                     std::vector<double>& u) const;
  /// Top layer of the unknown vector as a physical nodal field.
  void extract_top(const std::vector<double>& u,
                   std::vector<double>& nodal) const;
  void enforce_constraints(std::vector<double>& u) const;
  /// Applies the update and re-enforces constraints.
  void apply_update(std::vector<double>& u, const std::vector<double>& du,
                    double alpha) const;
  /// All nodal states of both layers valid for the law?
  bool states_valid(const CompressibleLaw& law,
                    const std::vector<double>& u) const;

  // ---- assembly ------------------------------------------------------------
  template <class Law>
  void assemble_residual(const Law& law, const SpaceTimeSlab& slab,
                         const std::vector<double>& u,
                         const std::vector<TauParams>& taus,
                         const TermFlags& terms, std::vector<double>& r) const;

  template <class Law>
  void assemble_tangent(const Law& law, const SpaceTimeSlab& slab,
                        const std::vector<double>& u,
                        const std::vector<TauParams>& taus,
                        const TermFlags& terms, BlockCsr& mat) const;

  /// Replaces constrained rows by (U_c - g_c).
  void constrain_residual(const std::vector<double>& u,
                          std::vector<double>& r) const;
  /// Zeroes constrained rows and columns, unit diagonal.
  void constrain_matrix(BlockCsr& mat) const;

  /// Per-element frozen stabilization parameters from integral-mean
  /// states of the current iterate.
  std::vector<TauParams> build_tau_table(const CompressibleLaw& law,
                                         const FreeStream& fs,
                                         const SpaceTimeSlab& slab,
                                         const std::vector<double>& u,
                                         bool supg_on, bool dc_on,
                                         double dc_clamp) const;

  // ---- element-level access (tests, diagnostics) ---------------------------
  void gather_element(int elem, const std::vector<double>& u,
                      double out[kElemDofs]) const;
  void gather_prev_element(int elem, const std::vector<double>& prev_top,
                           double out[12]) const;

  template <class Law>
  void element_residual_global(int elem, const Law& law,
                               const SpaceTimeSlab& slab,
                               const std::vector<double>& u, TauParams tau,
                               const TermFlags& terms,
                               double out[kElemDofs]) const {
    double coeffs[kElemDofs], prev[12];
    gather_element(elem, u, coeffs);
    gather_prev_element(elem, *slab.prev_top, prev);
    element_residual(elements_[elem], qpts_.data(), loads_.data(), law,
                     slab.dt, coeffs, prev, tau, terms, out);
  }

  template <class Law>
  void element_tangent_global(int elem, const Law& law,
                              const SpaceTimeSlab& slab,
                              const std::vector<double>& u, TauParams tau,
                              const TermFlags& terms,
                              double out[kElemDofs * kElemDofs]) const {
    double coeffs[kElemDofs];
    gather_element(elem, u, coeffs);
    element_tangent(elements_[elem], qpts_.data(), law, slab.dt, coeffs, tau,
                    terms, out);
  }

 private:
  struct ScalarConstraint {
    int dof = 0;       // scalar dof index (rotated frame)
    double value = 0;  // g in the rotated frame
  };

  void build_caches(SlabQuadrature quad);
  void build_constraints(const std::map<int, BoundaryCondition>& bcs);
  void build_pattern();
  void scatter_residual(int elem, const double r[kElemDofs],
                        std::vector<double>& out) const;
  void scatter_tangent(int elem, const double k[kElemDofs * kElemDofs],
                       BlockCsr& mat) const;

  const CaseGeometry* geom_ = nullptr;
  Mode mode_ = Mode::Nefem;
  int n_nodes_ = 0;

  std::vector<ElementCache> elements_;
  std::vector<QuadPoint> qpts_;
  std::vector<EdgeLoadPoint> loads_;

  std::vector<int> frame_of_;   // node -> frame index or -1
  std::vector<Vec2> frames_;    // unit wall normals

  std::vector<ScalarConstraint> constraints_;
  BlockCsr prototype_;
  std::vector<std::int64_t> scatter_;  // 36 block slots per element
  // Constrained block-columns: block -> list of (value index) to zero.
  std::vector<std::pair<int, std::vector<std::int64_t>>> col_blocks_;
  std::vector<std::uint8_t> constrained_mask_;  // per block, 4-bit comp mask
};

// ---------------------------------------------------------------------------
// Templated assembly: deterministic two-phase scheme (parallel element
// kernels into a buffer, serial scatter in element order).
// ---------------------------------------------------------------------------

namespace assembly_detail {

struct FailureLatch {
  std::atomic<bool> failed{false};
  std::mutex mtx;
  std::string message;

  void record(const std::string& msg) {
    if (failed.exchange(true)) return;
    std::lock_guard<std::mutex> lk(mtx);
    message = msg;
  }
};

}  // namespace assembly_detail

template <class Law>
void SlabSystem::assemble_residual(const Law& law, const SpaceTimeSlab& slab,
                                   const std::vector<double>& u,
                                   const std::vector<TauParams>& taus,
                                   const TermFlags& terms,
                                   std::vector<double>& r) const {
  const int nelem = static_cast<int>(elements_.size());
  r.assign(n_dofs(), 0.0);
  std::vector<double> buf(static_cast<std::size_t>(nelem) * kElemDofs);
  assembly_detail::FailureLatch latch;

  global_pool().parallel_chunks(nelem, 32, [&](std::size_t e0, std::size_t e1) {
    if (latch.failed.load(std::memory_order_relaxed)) return;
    try {
      double coeffs[kElemDofs], prev[12];
      for (std::size_t e = e0; e < e1; ++e) {
        gather_element(static_cast<int>(e), u, coeffs);
        gather_prev_element(static_cast<int>(e), *slab.prev_top, prev);
        element_residual(elements_[e], qpts_.data(), loads_.data(), law,
                         slab.dt, coeffs, prev, taus[e], terms,
                         buf.data() + e * kElemDofs);
      }
    } catch (const Error& err) {
      latch.record(err.what());
    }
  });
  if (latch.failed.load()) throw StateError(latch.message);

  for (int e = 0; e < nelem; ++e)
    scatter_residual(e, buf.data() + static_cast<std::size_t>(e) * kElemDofs, r);
}

template <class Law>
void SlabSystem::assemble_tangent(const Law& law, const SpaceTimeSlab& slab,
                                  const std::vector<double>& u,
                                  const std::vector<TauParams>& taus,
                                  const TermFlags& terms, BlockCsr& mat) const {
  const int nelem = static_cast<int>(elements_.size());
  mat.zero_values();
  constexpr int kChunk = 2048;
  std::vector<double> buf(static_cast<std::size_t>(kChunk) * kElemDofs *
                          kElemDofs);
  assembly_detail::FailureLatch latch;

  for (int c0 = 0; c0 < nelem; c0 += kChunk) {
    const int c1 = std::min(nelem, c0 + kChunk);
    global_pool().parallel_chunks(
        c1 - c0, 8, [&](std::size_t i0, std::size_t i1) {
          if (latch.failed.load(std::memory_order_relaxed)) return;
          try {
            double coeffs[kElemDofs];
            for (std::size_t i = i0; i < i1; ++i) {
              const int e = c0 + static_cast<int>(i);
              gather_element(e, u, coeffs);
              element_tangent(elements_[e], qpts_.data(), law, slab.dt, coeffs,
                              taus[e], terms,
                              buf.data() + i * kElemDofs * kElemDofs);
            }
          } catch (const Error& err) {
            latch.record(err.what());
          }
        });
    if (latch.failed.load()) throw StateError(latch.message);
    for (int e = c0; e < c1; ++e)
      scatter_tangent(e,
                      buf.data() +
                          static_cast<std::size_t>(e - c0) * kElemDofs *
                              kElemDofs,
                      mat);
  }
}

}  // namespace nefem
