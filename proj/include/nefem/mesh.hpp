#pragma once

#include <array>
#include <string>
#include <vector>

#include "nefem/error.hpp"
#include "nefem/vec2.hpp"

namespace nefem {

/// Unstructured triangular mesh. Triangles are counterclockwise;
/// boundary edges are directed with the domain on the left (outer loops
/// counterclockwise, holes clockwise) and each belongs to exactly one
/// triangle.
struct Mesh {
  static constexpr int kSpatialDim = 2;

  struct BoundaryEdge {
    int a = 0;
    int b = 0;
    int tag = 0;
  };

  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }

  double triangle_area(int t) const {
    const auto& tri = triangles[t];
    const Vec2 e1 = nodes[tri[1]] - nodes[tri[0]];
    const Vec2 e2 = nodes[tri[2]] - nodes[tri[0]];
    return 0.5 * e1.cross(e2);
  }

  /// Bounding-box diagonal, used for tolerance scaling.
  double diameter() const;
};

/// Reads the plain-text format
///   nodes N triangles T bedges B
///   N lines: x y
///   T lines: a b c     (0-based node ids)
///   B lines: a b tag
/// Clockwise triangles are reoriented; boundary edges are checked against
/// their owning triangle and flipped to the domain-on-the-left direction
/// when needed. Structural problems raise MeshError with a line number.
Mesh load_mesh(const std::string& path);

void save_mesh(const Mesh& mesh, const std::string& path);

/// Validates areas, boundary-edge ownership and loop closure. Called by
/// load_mesh; exposed for meshes built in memory.
void validate_mesh(Mesh& mesh);

/// Equilateral-equivalent edge length h = sqrt(4 A / sqrt(3)).
double element_size(const Mesh& mesh, int triangle);

}  // namespace nefem
