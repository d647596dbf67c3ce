#include "nefem/slab_system.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "nefem/mapping.hpp"
#include "nefem/mesh.hpp"
#include "nefem/quadrature.hpp"

namespace nefem {

namespace {

constexpr int kEdgeQuadPoints = 6;

void rotate_to_frame(Vec2 n, double* v4) {
  const double mx = v4[1], my = v4[2];
  v4[1] = n.x * mx + n.y * my;    // normal momentum
  v4[2] = -n.y * mx + n.x * my;   // tangential momentum
}

void rotate_to_phys(Vec2 n, double* v4) {
  const double mn = v4[1], mt = v4[2];
  v4[1] = n.x * mn - n.y * mt;
  v4[2] = n.y * mn + n.x * mt;
}

}  // namespace

SlabSystem::SlabSystem(const CaseGeometry& geom, Mode mode,
                       std::map<int, BoundaryCondition> bcs,
                       SlabQuadrature quad)
    : geom_(&geom), mode_(mode), n_nodes_(geom.mesh.n_nodes()) {
  build_caches(quad);
  build_constraints(bcs);
  build_pattern();
}

void SlabSystem::build_caches(SlabQuadrature quad) {
  const Mesh& mesh = geom_->mesh;
  const QuadratureRule std_rule = standard_quadrature(quad.standard_order);
  const QuadratureRule nef_rule = nefem_quadrature(quad.nefem_points);

  elements_.resize(mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    ElementCache& ec = elements_[t];
    ec.triangle = t;
    ec.h = element_size(mesh, t);
    const int rec_idx =
        mode_ == Mode::Nefem ? geom_->record_of_triangle[t] : -1;
    ec.q_begin = static_cast<int>(qpts_.size());

    if (rec_idx >= 0) {
      const NefemElementRecord& rec = geom_->records[rec_idx];
      const int k = rec.curved_edge;
      const auto& tri = mesh.triangles[t];
      ec.nodes = {tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]};
      const TrtElement trt(rec, geom_->curves.at(rec.curve_id), mesh);
      for (int q = 0; q < nef_rule.size(); ++q) {
        const ReferencePoint p = nef_rule.points[q];
        MappedPoint mp;
        try {
          mp = trt.map_with_jacobian(p);
        } catch (const GeometryError& e) {
          throw GeometryError("triangle " + std::to_string(t) + ": " +
                              e.what());
        }
        const auto grads = physical_gradients(mp.jacobian);
        QuadPoint qp;
        qp.wdet = nef_rule.weights[q] * mp.det;
        const auto L = shape_functions(p);
        for (int a = 0; a < 3; ++a) {
          qp.L[a] = L[a];
          qp.gx[a] = grads[a].x;
          qp.gy[a] = grads[a].y;
        }
        qpts_.push_back(qp);
      }
    } else {
      ec.nodes = mesh.triangles[t];
      const AffineTriangle at{{mesh.nodes[ec.nodes[0]], mesh.nodes[ec.nodes[1]],
                               mesh.nodes[ec.nodes[2]]}};
      const Mat2 jac = at.jacobian();
      const double det = jac.det();
      const auto grads = physical_gradients(jac);
      for (int q = 0; q < std_rule.size(); ++q) {
        QuadPoint qp;
        qp.wdet = std_rule.weights[q] * det;
        const auto L = shape_functions(std_rule.points[q]);
        for (int a = 0; a < 3; ++a) {
          qp.L[a] = L[a];
          qp.gx[a] = grads[a].x;
          qp.gy[a] = grads[a].y;
        }
        qpts_.push_back(qp);
      }
    }
    ec.q_count = static_cast<int>(qpts_.size()) - ec.q_begin;
    for (int q = ec.q_begin; q < ec.q_begin + ec.q_count; ++q) {
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          ec.mass[a][b] += qpts_[q].wdet * qpts_[q].L[a] * qpts_[q].L[b];
    }
  }
}

void SlabSystem::build_constraints(const std::map<int, BoundaryCondition>& bcs) {
  const Mesh& mesh = geom_->mesh;
  frame_of_.assign(n_nodes_, -1);

  // Directed edge -> (triangle, local edge).
  std::map<std::pair<int, int>, std::pair<int, int>> owner;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) owner[{tri[k], tri[(k + 1) % 3]}] = {t, k};
  }

  struct NodeAccum {
    std::array<std::optional<double>, 4> value;
    std::vector<Vec2> slip_normals;
  };
  std::map<int, NodeAccum> acc;
  const double vtol = 1e-12 * (1.0 + mesh.diameter());

  auto set_value = [&](int node, int comp, double v) {
    auto& slot = acc[node].value[comp];
    if (slot && std::abs(*slot - v) > vtol) {
      std::ostringstream os;
      os << "conflicting constraints at node " << node << " component "
         << comp << ": " << *slot << " vs " << v;
      throw ConfigError(os.str());
    }
    slot = v;
  };

  std::vector<EdgeLoadPoint> tmp_loads;                // per element, gathered later
  std::map<int, std::vector<EdgeLoadPoint>> elem_loads;
  std::vector<double> gl_x, gl_w;
  gauss_legendre(kEdgeQuadPoints, gl_x, gl_w);

  for (const auto& be : mesh.boundary_edges) {
    const auto bc_it = bcs.find(be.tag);
    if (bc_it == bcs.end())
      throw ConfigError("no boundary condition for mesh tag " +
                        std::to_string(be.tag));
    const BoundaryCondition& bc = bc_it->second;
    const auto own = owner.at({be.a, be.b});
    const int tri = own.first;
    const int local_edge = own.second;
    const int rec_idx =
        mode_ == Mode::Nefem ? geom_->record_of_triangle[tri] : -1;
    const bool curved = rec_idx >= 0 &&
                        geom_->records[rec_idx].curved_edge == local_edge;

    // Dirichlet side.
    for (int c = 0; c < 4; ++c) {
      if (!bc.mask[c]) continue;
      set_value(be.a, c, bc.values[c]);
      set_value(be.b, c, bc.values[c]);
    }
    if (bc.kind == BcKind::Slip) {
      if (curved) {
        const NefemElementRecord& rec = geom_->records[rec_idx];
        const NurbsCurve& curve = geom_->curves.at(rec.curve_id);
        acc[be.a].slip_normals.push_back(curve.outward_normal(rec.xi1));
        acc[be.b].slip_normals.push_back(curve.outward_normal(rec.xi2));
      } else {
        const Vec2 n =
            (mesh.nodes[be.b] - mesh.nodes[be.a]).normalized().rotated_cw();
        acc[be.a].slip_normals.push_back(n);
        acc[be.b].slip_normals.push_back(n);
      }
    }

    // Natural side: nonzero prescribed fluxes become edge loads.
    bool has_flux = false;
    for (int c = 0; c < 4; ++c) has_flux = has_flux || bc.flux[c] != 0.0;
    if (has_flux) {
      auto& list = elem_loads[tri];
      if (curved) {
        const NefemElementRecord& rec = geom_->records[rec_idx];
        const NurbsCurve& curve = geom_->curves.at(rec.curve_id);
        for (int q = 0; q < kEdgeQuadPoints; ++q) {
          const double xi = rec.xi1 + gl_x[q] * (rec.xi2 - rec.xi1);
          const double speed = curve.derivative(xi, 1).norm();
          EdgeLoadPoint lp;
          lp.w = gl_w[q] * (rec.xi2 - rec.xi1) * speed;
          const double s = (rec.xi2 - xi) / (rec.xi2 - rec.xi1);
          lp.L[0] = s;
          lp.L[1] = 1.0 - s;
          lp.L[2] = 0.0;
          lp.h = bc.flux;
          list.push_back(lp);
        }
      } else {
        const ElementCache& ec = elements_[tri];
        int ia = -1, ib = -1;
        for (int a = 0; a < 3; ++a) {
          if (ec.nodes[a] == be.a) ia = a;
          if (ec.nodes[a] == be.b) ib = a;
        }
        const double len = (mesh.nodes[be.b] - mesh.nodes[be.a]).norm();
        for (int q = 0; q < kEdgeQuadPoints; ++q) {
          EdgeLoadPoint lp;
          lp.w = gl_w[q] * len;
          lp.L[ia] = 1.0 - gl_x[q];
          lp.L[ib] = gl_x[q];
          lp.h = bc.flux;
          list.push_back(lp);
        }
      }
    }
  }

  for (auto& [tri, list] : elem_loads) {
    elements_[tri].load_begin = static_cast<int>(loads_.size());
    elements_[tri].load_count = static_cast<int>(list.size());
    loads_.insert(loads_.end(), list.begin(), list.end());
  }

  // Resolve slip constraints per node.
  for (auto& [node, na] : acc) {
    if (na.slip_normals.empty()) continue;
    std::vector<Vec2> unique;
    for (const Vec2& n : na.slip_normals) {
      bool dup = false;
      for (const Vec2& u : unique)
        if (std::abs(n.cross(u)) <= 1e-8 && n.dot(u) > 0.0) dup = true;
      if (!dup) unique.push_back(n);
    }
    const bool mom_set = na.value[1].has_value() || na.value[2].has_value();
    if (mom_set) {
      if (!(na.value[1] && na.value[2]))
        throw ConfigError("conflicting constraints at node " +
                          std::to_string(node) +
                          ": slip combined with a single-momentum Dirichlet");
      for (const Vec2& n : unique) {
        if (std::abs(*na.value[1] * n.x + *na.value[2] * n.y) > 1e-10)
          throw ConfigError("conflicting constraints at node " +
                            std::to_string(node) +
                            ": Dirichlet momentum violates the slip wall");
      }
      continue;  // full momentum Dirichlet subsumes slip
    }
    if (unique.size() >= 2) {
      // Wall corner (e.g. a sharp trailing edge): pin both momenta.
      na.value[1] = 0.0;
      na.value[2] = 0.0;
    } else {
      frame_of_[node] = static_cast<int>(frames_.size());
      frames_.push_back(unique.front());
      na.value[1] = 0.0;  // normal momentum in the rotated frame
    }
  }

  constrained_mask_.assign(2 * static_cast<std::size_t>(n_nodes_), 0);
  for (const auto& [node, na] : acc) {
    for (int layer = 0; layer < 2; ++layer) {
      for (int c = 0; c < 4; ++c) {
        if (!na.value[c]) continue;
        if (frame_of_[node] >= 0 && c == 2) continue;  // tangential free
        const int block = layer * n_nodes_ + node;
        constraints_.push_back({block * 4 + c, *na.value[c]});
        constrained_mask_[block] |= static_cast<std::uint8_t>(1u << c);
      }
    }
  }
  std::sort(constraints_.begin(), constraints_.end(),
            [](const ScalarConstraint& a, const ScalarConstraint& b) {
              return a.dof < b.dof;
            });
}

void SlabSystem::build_pattern() {
  const int nelem = static_cast<int>(elements_.size());
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(nelem) * 36);
  for (const ElementCache& ec : elements_) {
    for (int lp = 0; lp < 2; ++lp)
      for (int a = 0; a < 3; ++a)
        for (int lq = 0; lq < 2; ++lq)
          for (int b = 0; b < 3; ++b)
            pairs.emplace_back(lp * n_nodes_ + ec.nodes[a],
                               lq * n_nodes_ + ec.nodes[b]);
  }
  prototype_ = BlockCsr(2 * n_nodes_, std::move(pairs));

  scatter_.resize(static_cast<std::size_t>(nelem) * 36);
  for (int e = 0; e < nelem; ++e) {
    const ElementCache& ec = elements_[e];
    for (int lp = 0; lp < 2; ++lp)
      for (int a = 0; a < 3; ++a)
        for (int lq = 0; lq < 2; ++lq)
          for (int b = 0; b < 3; ++b) {
            const int slot = (lp * 3 + a) * 6 + (lq * 3 + b);
            scatter_[static_cast<std::size_t>(e) * 36 + slot] =
                prototype_.find_block(lp * n_nodes_ + ec.nodes[a],
                                      lq * n_nodes_ + ec.nodes[b]);
          }
  }

  // Blocks sitting in a constrained block-column, for column elimination.
  std::map<int, std::vector<std::int64_t>> col_map;
  for (int br = 0; br < prototype_.n_block_rows(); ++br) {
    for (std::int64_t idx = prototype_.row_ptr()[br];
         idx < prototype_.row_ptr()[br + 1]; ++idx) {
      const int col = prototype_.col_idx()[idx];
      if (constrained_mask_[col]) col_map[col].push_back(idx);
    }
  }
  col_blocks_.assign(col_map.begin(), col_map.end());
}

void SlabSystem::gather_element(int elem, const std::vector<double>& u,
                                double out[kElemDofs]) const {
  const ElementCache& ec = elements_[elem];
  for (int layer = 0; layer < 2; ++layer) {
    for (int a = 0; a < 3; ++a) {
      const int node = ec.nodes[a];
      const double* src = u.data() + (layer * n_nodes_ + node) * 4;
      double* dst = out + (layer * 3 + a) * 4;
      for (int c = 0; c < 4; ++c) dst[c] = src[c];
      if (frame_of_[node] >= 0) rotate_to_phys(frames_[frame_of_[node]], dst);
    }
  }
}

void SlabSystem::gather_prev_element(int elem, const std::vector<double>& prev,
                                     double out[12]) const {
  const ElementCache& ec = elements_[elem];
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 4; ++c) out[a * 4 + c] = prev[ec.nodes[a] * 4 + c];
}

void SlabSystem::scatter_residual(int elem, const double r[kElemDofs],
                                  std::vector<double>& out) const {
  const ElementCache& ec = elements_[elem];
  for (int layer = 0; layer < 2; ++layer) {
    for (int a = 0; a < 3; ++a) {
      const int node = ec.nodes[a];
      double tmp[4];
      for (int c = 0; c < 4; ++c) tmp[c] = r[(layer * 3 + a) * 4 + c];
      if (frame_of_[node] >= 0) rotate_to_frame(frames_[frame_of_[node]], tmp);
      double* dst = out.data() + (layer * n_nodes_ + node) * 4;
      for (int c = 0; c < 4; ++c) dst[c] += tmp[c];
    }
  }
}

void SlabSystem::scatter_tangent(int elem, const double k[kElemDofs * kElemDofs],
                                 BlockCsr& mat) const {
  const ElementCache& ec = elements_[elem];
  const std::int64_t* slots = scatter_.data() + static_cast<std::size_t>(elem) * 36;
  for (int lp = 0; lp < 2; ++lp) {
    for (int a = 0; a < 3; ++a) {
      const int row_node = ec.nodes[a];
      const int fa = frame_of_[row_node];
      for (int lq = 0; lq < 2; ++lq) {
        for (int b = 0; b < 3; ++b) {
          const int col_node = ec.nodes[b];
          const int fb = frame_of_[col_node];
          double blk[4][4];
          const int r0 = (lp * 3 + a) * 4;
          const int c0 = (lq * 3 + b) * 4;
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
              blk[i][j] = k[(r0 + i) * kElemDofs + (c0 + j)];
          if (fa >= 0) {
            const Vec2 n = frames_[fa];
            for (int j = 0; j < 4; ++j) {
              const double b1 = blk[1][j], b2 = blk[2][j];
              blk[1][j] = n.x * b1 + n.y * b2;
              blk[2][j] = -n.y * b1 + n.x * b2;
            }
          }
          if (fb >= 0) {
            const Vec2 n = frames_[fb];
            for (int i = 0; i < 4; ++i) {
              const double b1 = blk[i][1], b2 = blk[i][2];
              blk[i][1] = n.x * b1 + n.y * b2;
              blk[i][2] = -n.y * b1 + n.x * b2;
            }
          }
          double* dst = mat.block(slots[(lp * 3 + a) * 6 + (lq * 3 + b)]);
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) dst[4 * i + j] += blk[i][j];
        }
      }
    }
  }
}

void SlabSystem::init_unknowns(const std::vector<double>& nodal,
                               std::vector<double>& u) const {
  u.resize(n_dofs());
  for (int layer = 0; layer < 2; ++layer) {
    for (int node = 0; node < n_nodes_; ++node) {
      double tmp[4];
      for (int c = 0; c < 4; ++c) tmp[c] = nodal[node * 4 + c];
      if (frame_of_[node] >= 0) rotate_to_frame(frames_[frame_of_[node]], tmp);
      double* dst = u.data() + (layer * n_nodes_ + node) * 4;
      for (int c = 0; c < 4; ++c) dst[c] = tmp[c];
    }
  }
  enforce_constraints(u);
}

void SlabSystem::extract_top(const std::vector<double>& u,
                             std::vector<double>& nodal) const {
  nodal.resize(4 * n_nodes_);
  for (int node = 0; node < n_nodes_; ++node) {
    double tmp[4];
    const double* src = u.data() + (n_nodes_ + node) * 4;
    for (int c = 0; c < 4; ++c) tmp[c] = src[c];
    if (frame_of_[node] >= 0) rotate_to_phys(frames_[frame_of_[node]], tmp);
    for (int c = 0; c < 4; ++c) nodal[node * 4 + c] = tmp[c];
  }
}

void SlabSystem::enforce_constraints(std::vector<double>& u) const {
  for (const ScalarConstraint& sc : constraints_) u[sc.dof] = sc.value;
}

void SlabSystem::apply_update(std::vector<double>& u,
                              const std::vector<double>& du,
                              double alpha) const {
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += alpha * du[i];
  enforce_constraints(u);
}

bool SlabSystem::states_valid(const CompressibleLaw& law,
                              const std::vector<double>& u) const {
  for (int block = 0; block < 2 * n_nodes_; ++block) {
    // Frame rotations keep density, energy and |momentum| unchanged.
    const State4<double> s = {u[block * 4], u[block * 4 + 1], u[block * 4 + 2],
                              u[block * 4 + 3]};
    if (!law.valid(s)) return false;
  }
  return true;
}

void SlabSystem::constrain_residual(const std::vector<double>& u,
                                    std::vector<double>& r) const {
  for (const ScalarConstraint& sc : constraints_)
    r[sc.dof] = u[sc.dof] - sc.value;
}

void SlabSystem::constrain_matrix(BlockCsr& mat) const {
  // Rows.
  for (const ScalarConstraint& sc : constraints_) {
    const int block = sc.dof / 4;
    const int comp = sc.dof % 4;
    for (std::int64_t idx = mat.row_ptr()[block];
         idx < mat.row_ptr()[block + 1]; ++idx) {
      double* b = mat.block(idx);
      for (int j = 0; j < 4; ++j) b[4 * comp + j] = 0.0;
    }
  }
  // Columns.
  for (const auto& [col_block, idxs] : col_blocks_) {
    const std::uint8_t mask = constrained_mask_[col_block];
    for (const std::int64_t idx : idxs) {
      double* b = mat.block(idx);
      for (int c = 0; c < 4; ++c) {
        if (!(mask & (1u << c))) continue;
        for (int i = 0; i < 4; ++i) b[4 * i + c] = 0.0;
      }
    }
  }
  // Unit diagonal.
  for (const ScalarConstraint& sc : constraints_) {
    const int block = sc.dof / 4;
    const int comp = sc.dof % 4;
    const std::int64_t diag = mat.find_block(block, block);
    mat.block(diag)[4 * comp + comp] = 1.0;
  }
}

std::vector<TauParams> SlabSystem::build_tau_table(
    const CompressibleLaw& law, const FreeStream& fs, const SpaceTimeSlab& slab,
    const std::vector<double>& u, bool supg_on, bool dc_on,
    double dc_clamp) const {
  const int nelem = static_cast<int>(elements_.size());
  std::vector<TauParams> taus(nelem);
  if (!supg_on && !dc_on) return taus;
  assembly_detail::FailureLatch latch;

  global_pool().parallel_chunks(nelem, 64, [&](std::size_t e0, std::size_t e1) {
    if (latch.failed.load(std::memory_order_relaxed)) return;
    try {
      double coeffs[kElemDofs];
      for (std::size_t e = e0; e < e1; ++e) {
        const ElementCache& ec = elements_[e];
        gather_element(static_cast<int>(e), u, coeffs);
        State4<double> ubar{}, uxbar{}, uybar{}, utbar{};
        double wsum = 0.0;
        for (int q = ec.q_begin; q < ec.q_begin + ec.q_count; ++q) {
          const QuadPoint& qp = qpts_[q];
          for (int m = 0; m < TimeRule::kPoints; ++m) {
            const double tt = TimeRule::that[m];
            const double w = qp.wdet * TimeRule::weight[m];
            State4<double> v;
            kernel_detail::interpolate(qp.L, coeffs, 1.0 - tt, tt, v);
            for (int c = 0; c < 4; ++c) ubar[c] += w * v[c];
            kernel_detail::interpolate_gradient(qp.gx, coeffs, 1.0 - tt, tt,
                                                v);
            for (int c = 0; c < 4; ++c) uxbar[c] += w * v[c];
            kernel_detail::interpolate_gradient(qp.gy, coeffs, 1.0 - tt, tt,
                                                v);
            for (int c = 0; c < 4; ++c) uybar[c] += w * v[c];
            kernel_detail::interpolate(qp.L, coeffs, -1.0 / slab.dt,
                                       1.0 / slab.dt, v);
            for (int c = 0; c < 4; ++c) utbar[c] += w * v[c];
            wsum += w;
          }
        }
        for (int c = 0; c < 4; ++c) {
          ubar[c] /= wsum;
          uxbar[c] /= wsum;
          uybar[c] /= wsum;
          utbar[c] /= wsum;
        }
        if (!law.valid(ubar))
          throw StateError("invalid mean state in triangle " +
                           std::to_string(ec.triangle));
        const ConservationState state = ConservationState::from_array(ubar);
        TauParams tp;
        if (supg_on) tp.tau_supg = tau_supg(state, law.gas, ec.h, slab.dt);
        if (dc_on) {
          Mat4<double> a1, a2;
          law.jacobians(ubar, a1, a2);
          State4<double> res = utbar;
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
              res[i] += a1[i][j] * uxbar[j] + a2[i][j] * uybar[j];
          double grad[4][2];
          for (int c = 0; c < 4; ++c) {
            grad[c][0] = uxbar[c];
            grad[c][1] = uybar[c];
          }
          tp.nu_dc = tau_dc(res, grad, ec.h, fs, state, law.gas, dc_clamp);
        }
        taus[e] = tp;
      }
    } catch (const Error& err) {
      latch.record(err.what());
    }
  });
  if (latch.failed.load()) throw StateError(latch.message);
  return taus;
}

}  // namespace nefem
