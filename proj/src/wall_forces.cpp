#include "nefem/wall_forces.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nefem/mapping.hpp"
#include "nefem/quadrature.hpp"

namespace nefem {

void viscous_stress(const State4<double>& u, const double grad[4][2],
                    const GasModel& gas, double& t11, double& t12,
                    double& t22) {
  if (gas.inviscid) {
    t11 = t12 = t22 = 0.0;
    return;
  }
  const double inv_rho = 1.0 / u[0];
  const double vx = u[1] * inv_rho;
  const double vy = u[2] * inv_rho;
  const double ux = (grad[1][0] - vx * grad[0][0]) * inv_rho;
  const double uy = (grad[1][1] - vx * grad[0][1]) * inv_rho;
  const double wx = (grad[2][0] - vy * grad[0][0]) * inv_rho;
  const double wy = (grad[2][1] - vy * grad[0][1]) * inv_rho;
  t11 = gas.mu * ((4.0 / 3.0) * ux - (2.0 / 3.0) * wy);
  t22 = gas.mu * ((4.0 / 3.0) * wy - (2.0 / 3.0) * ux);
  t12 = gas.mu * (uy + wx);
}

namespace {

struct WallEdgeContext {
  int tri = -1;
  int local_edge = -1;
  const NefemElementRecord* rec = nullptr;  // curved edge when non-null
  std::array<int, 3> nodes{};               // local order (edge a, edge b, interior)
};

// Shared walk over wall edges; fn receives per-quadrature-point data.
template <class Fn>
void for_each_wall_point(const CaseGeometry& geom, Mode mode,
                         const std::vector<double>& nodal, const GasModel& gas,
                         int n_quad, const Fn& fn) {
  const Mesh& mesh = geom.mesh;
  std::map<std::pair<int, int>, std::pair<int, int>> owner;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) owner[{tri[k], tri[(k + 1) % 3]}] = {t, k};
  }
  std::vector<double> gx, gw;
  gauss_legendre(n_quad, gx, gw);

  for (const auto& be : mesh.boundary_edges) {
    if (!geom.is_wall_tag(be.tag)) continue;
    const auto own = owner.at({be.a, be.b});
    const int t = own.first;
    const int k = own.second;
    const auto& tri = mesh.triangles[t];
    const int rec_idx = geom.record_of_triangle[t];
    const bool curved = mode == Mode::Nefem && rec_idx >= 0 &&
                        geom.records[rec_idx].curved_edge == k;

    const std::array<int, 3> lnodes = {tri[k], tri[(k + 1) % 3],
                                       tri[(k + 2) % 3]};
    State4<double> un[3];
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 4; ++c) un[a][c] = nodal[lnodes[a] * 4 + c];

    if (curved) {
      const NefemElementRecord& rec = geom.records[rec_idx];
      const NurbsCurve& curve = geom.curves.at(rec.curve_id);
      const TrtElement trt(rec, curve, mesh);
      const double dxi = rec.xi2 - rec.xi1;
      for (int q = 0; q < n_quad; ++q) {
        const double xi = rec.xi1 + gx[q] * dxi;
        const double w = gw[q] * dxi * curve.derivative(xi, 1).norm();
        const Vec2 n = curve.outward_normal(xi);
        const double s = (rec.xi2 - xi) / dxi;
        State4<double> u;
        for (int c = 0; c < 4; ++c)
          u[c] = s * un[0][c] + (1.0 - s) * un[1][c];
        double grad[4][2] = {};
        if (!gas.inviscid) {
          const MappedPoint mp = trt.map_with_jacobian({s, 1.0 - s});
          const auto grads = physical_gradients(mp.jacobian);
          for (int c = 0; c < 4; ++c)
            for (int a = 0; a < 3; ++a) {
              grad[c][0] += grads[a].x * un[a][c];
              grad[c][1] += grads[a].y * un[a][c];
            }
        }
        fn(w, curve.evaluate(xi), n, u, grad, be, s);
      }
    } else {
      const Vec2 pa = mesh.nodes[be.a];
      const Vec2 pb = mesh.nodes[be.b];
      const double len = (pb - pa).norm();
      const Vec2 n = (pb - pa).normalized().rotated_cw();
      double grad[4][2] = {};
      if (!gas.inviscid) {
        const AffineTriangle at{{mesh.nodes[lnodes[0]], mesh.nodes[lnodes[1]],
                                 mesh.nodes[lnodes[2]]}};
        const auto grads = physical_gradients(at.jacobian());
        for (int c = 0; c < 4; ++c)
          for (int a = 0; a < 3; ++a) {
            grad[c][0] += grads[a].x * un[a][c];
            grad[c][1] += grads[a].y * un[a][c];
          }
      }
      for (int q = 0; q < n_quad; ++q) {
        const double w = gw[q] * len;
        State4<double> u;
        for (int c = 0; c < 4; ++c)
          u[c] = (1.0 - gx[q]) * un[0][c] + gx[q] * un[1][c];
        fn(w, pa + (pb - pa) * gx[q], n, u, grad, be, 1.0 - gx[q]);
      }
    }
  }
}

}  // namespace

WallForces wall_forces(const CaseGeometry& geom, Mode mode,
                       const std::vector<double>& nodal, const FreeStream& fs,
                       const GasModel& gas) {
  WallForces out;
  for_each_wall_point(
      geom, mode, nodal, gas, 8,
      [&](double w, Vec2, Vec2 n, const State4<double>& u,
          const double grad[4][2], const Mesh::BoundaryEdge&, double) {
        const double p = pressure_raw(u, gas.gamma);
        out.cd_pressure += w * p * n.x;
        if (!gas.inviscid) {
          double t11, t12, t22;
          viscous_stress(u, grad, gas, t11, t12, t22);
          out.cd_viscous -= w * (t11 * n.x + t12 * n.y);
        }
      });
  const double scale = fs.dynamic_head() * fs.lref;
  out.cd_pressure /= scale;
  out.cd_viscous /= scale;
  return out;
}

std::vector<WallSample> wall_samples(const CaseGeometry& geom, Mode mode,
                                     const std::vector<double>& nodal,
                                     const FreeStream& fs, const GasModel& gas,
                                     WallCoordinate coord, Vec2 center) {
  const Mesh& mesh = geom.mesh;
  std::map<int, WallSample> per_node;
  std::map<int, int> contributions;

  // Nodal pressure/cp directly; cf averaged from the adjacent edge ends.
  for_each_wall_point(
      geom, mode, nodal, gas, 2,
      [&](double, Vec2, Vec2 n, const State4<double>&, const double grad[4][2],
          const Mesh::BoundaryEdge& be, double s) {
        // Attribute this endpoint-ish sample to the nearer node.
        const int node = s > 0.5 ? be.a : be.b;
        auto& ws = per_node[node];
        ws.node = node;
        double cf = 0.0;
        if (!gas.inviscid) {
          double t11, t12, t22;
          const State4<double> u_node = {nodal[node * 4], nodal[node * 4 + 1],
                                         nodal[node * 4 + 2],
                                         nodal[node * 4 + 3]};
          viscous_stress(u_node, grad, gas, t11, t12, t22);
          const Vec2 traction{t11 * n.x + t12 * n.y, t12 * n.x + t22 * n.y};
          const Vec2 tangent{-n.y, n.x};
          cf = traction.dot(tangent) / fs.dynamic_head();
        }
        ws.cf += cf;
        contributions[node] += 1;
      });

  std::vector<WallSample> out;
  out.reserve(per_node.size());
  for (auto& [node, ws] : per_node) {
    if (contributions[node] > 0) ws.cf /= contributions[node];
    const ConservationState u{nodal[node * 4], nodal[node * 4 + 1],
                              nodal[node * 4 + 2], nodal[node * 4 + 3]};
    ws.p = pressure(u, gas);
    ws.cp = pressure_coefficient(ws.p, fs, gas);
    const Vec2 x = mesh.nodes[node];
    if (coord == WallCoordinate::ThetaDegrees) {
      double th = std::atan2(x.y - center.y, -(x.x - center.x)) * 180.0 / M_PI;
      if (th < 0.0) th += 360.0;
      ws.arc = th;
    } else {
      ws.arc = x.x;
    }
    out.push_back(ws);
  }
  std::sort(out.begin(), out.end(), [&](const WallSample& a, const WallSample& b) {
    if (a.arc != b.arc) return a.arc < b.arc;
    return mesh.nodes[a.node].y < mesh.nodes[b.node].y;
  });
  return out;
}

Vec2 wall_vector_integral(const CaseGeometry& geom, Mode mode,
                          const std::function<Vec2(Vec2, Vec2)>& f,
                          int n_quad) {
  Vec2 total{};
  GasModel inviscid_gas;  // gradients not needed
  std::vector<double> dummy(geom.mesh.n_nodes() * 4, 1.0);
  for (int i = 0; i < geom.mesh.n_nodes(); ++i) dummy[i * 4 + 3] = 2.5;
  for_each_wall_point(geom, mode, dummy, inviscid_gas, n_quad,
                      [&](double w, Vec2 x, Vec2 n, const State4<double>&,
                          const double[4][2], const Mesh::BoundaryEdge&,
                          double) { total += w * f(x, n); });
  return total;
}

}  // namespace nefem
