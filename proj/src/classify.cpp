#include "nefem/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nefem {

namespace {
constexpr double kSeamTol = 1e-7;
}

std::vector<NefemElementRecord> classify_elements(
    const Mesh& mesh, const CurveSet& curves,
    const std::map<int, int>& wall_tag_to_curve) {
  std::vector<NefemElementRecord> records;
  if (wall_tag_to_curve.empty()) return records;

  for (const auto& [tag, curve_id] : wall_tag_to_curve) {
    if (!curves.count(curve_id)) {
      throw ConfigError("wall tag " + std::to_string(tag) +
                        " references unknown curve " + std::to_string(curve_id));
    }
  }

  // Directed edge -> (triangle, local edge index).
  std::map<std::pair<int, int>, std::pair<int, int>> owner;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k)
      owner[{tri[k], tri[(k + 1) % 3]}] = {t, k};
  }

  const double coord_tol = 1e-8 * std::max(mesh.diameter(), 1e-30);
  std::map<std::pair<int, int>, double> node_xi;  // (curve, node) -> xi
  auto project = [&](int curve_id, int node) {
    const auto key = std::make_pair(curve_id, node);
    auto it = node_xi.find(key);
    if (it != node_xi.end()) return it->second;
    const NurbsCurve& curve = curves.at(curve_id);
    const double xi = curve.closest_point(mesh.nodes[node]);
    const double dist = (curve.evaluate(xi) - mesh.nodes[node]).norm();
    if (dist > coord_tol) {
      std::ostringstream os;
      os << "wall node " << node << " is off curve " << curve_id << " by "
         << dist << " (tolerance " << coord_tol << ")";
      throw MeshError(os.str());
    }
    node_xi.emplace(key, xi);
    return xi;
  };

  std::vector<int> record_of(mesh.n_triangles(), -1);
  for (const auto& be : mesh.boundary_edges) {
    const auto wt = wall_tag_to_curve.find(be.tag);
    if (wt == wall_tag_to_curve.end()) continue;
    const int curve_id = wt->second;
    const NurbsCurve& curve = curves.at(curve_id);

    const auto own = owner.find({be.a, be.b});
    if (own == owner.end())
      throw MeshError("wall edge " + std::to_string(be.a) + "-" +
                      std::to_string(be.b) + " has no owning triangle");
    const int tri = own->second.first;
    const int local_edge = own->second.second;
    if (record_of[tri] >= 0) {
      throw MeshError(
          "triangle " + std::to_string(tri) +
          " has two wall edges; split it so each wall triangle has exactly "
          "one curved edge");
    }

    NefemElementRecord rec;
    rec.triangle = tri;
    rec.curved_edge = local_edge;
    rec.curve_id = curve_id;
    rec.interior_node = mesh.triangles[tri][(local_edge + 2) % 3];
    rec.xi1 = project(curve_id, be.a);
    rec.xi2 = project(curve_id, be.b);
    if (rec.xi2 < rec.xi1) {
      // A closed curve's seam node carries xi = 0; the edge ending there
      // uses the equivalent parameter 1.
      if (curve.closed() && rec.xi2 <= kSeamTol &&
          (curve.evaluate(1.0) - mesh.nodes[be.b]).norm() <= coord_tol) {
        rec.xi2 = 1.0;
      } else {
        std::ostringstream os;
        os << "wall edge " << be.a << "-" << be.b
           << " runs against the curve orientation or straddles the seam "
              "(xi "
           << rec.xi1 << " -> " << rec.xi2 << ")";
        throw MeshError(os.str());
      }
    }
    if (!(rec.xi2 > rec.xi1))
      throw MeshError("wall edge " + std::to_string(be.a) + "-" +
                      std::to_string(be.b) + " collapses in parameter space");
    record_of[tri] = 0;  // placeholder until sorted
    records.push_back(rec);
  }

  std::sort(records.begin(), records.end(),
            [](const NefemElementRecord& a, const NefemElementRecord& b) {
              return a.triangle < b.triangle;
            });
  return records;
}

CaseGeometry CaseGeometry::build(Mesh mesh, CurveSet curves,
                                 std::map<int, int> wall_tag_to_curve) {
  CaseGeometry g;
  g.mesh = std::move(mesh);
  g.curves = std::move(curves);
  g.wall_tag_to_curve = std::move(wall_tag_to_curve);
  g.records = classify_elements(g.mesh, g.curves, g.wall_tag_to_curve);
  g.record_of_triangle.assign(g.mesh.n_triangles(), -1);
  for (int i = 0; i < static_cast<int>(g.records.size()); ++i)
    g.record_of_triangle[g.records[i].triangle] = i;
  return g;
}

}  // namespace nefem
