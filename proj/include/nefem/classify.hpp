#pragma once

#include <map>
#include <vector>

#include "nefem/curve_io.hpp"
#include "nefem/mesh.hpp"

namespace nefem {

/// One boundary-enhanced element: a triangle with exactly one edge on a
/// NURBS curve. Local edge k runs from triangle node k to node k+1; the
/// remaining node is the interior node x3 of the curved mapping.
struct NefemElementRecord {
  int triangle = -1;
  int curved_edge = -1;  // local edge index, 0..2
  int curve_id = -1;
  double xi1 = 0.0;  // parameter of the first wall node (edge start)
  double xi2 = 0.0;  // parameter of the second wall node (edge end)
  int interior_node = -1;
};

/// Tags mapped to curves get classified; everything else stays standard.
std::vector<NefemElementRecord> classify_elements(
    const Mesh& mesh, const CurveSet& curves,
    const std::map<int, int>& wall_tag_to_curve);

/// Geometry bundle shared by assembly and postprocessing: mesh, curves,
/// records, and a triangle -> record lookup. Immutable once built.
struct CaseGeometry {
  Mesh mesh;
  CurveSet curves;
  std::map<int, int> wall_tag_to_curve;
  std::vector<NefemElementRecord> records;
  std::vector<int> record_of_triangle;  // -1 for standard triangles

  static CaseGeometry build(Mesh mesh, CurveSet curves,
                            std::map<int, int> wall_tag_to_curve);

  bool is_wall_tag(int tag) const { return wall_tag_to_curve.count(tag) > 0; }
};

}  // namespace nefem
