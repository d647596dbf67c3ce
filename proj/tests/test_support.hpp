#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "nefem/classify.hpp"
#include "nefem/mesh.hpp"

namespace nefem::test {

/// n x n unit square split into 2n^2 triangles. Boundary tags:
/// 0 bottom, 1 right, 2 top, 3 left (counterclockwise loop).
inline Mesh make_unit_square(int n) {
  Mesh mesh;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.nodes.push_back({static_cast<double>(i) / n,
                            static_cast<double>(j) / n});
  auto id = [&](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1),
                d = id(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  for (int i = 0; i < n; ++i) {
    mesh.boundary_edges.push_back({id(i, 0), id(i + 1, 0), 0});
    mesh.boundary_edges.push_back({id(n, i), id(n, i + 1), 1});
    mesh.boundary_edges.push_back({id(n - i, n), id(n - i - 1, n), 2});
    mesh.boundary_edges.push_back({id(0, n - i), id(0, n - i - 1), 3});
  }
  validate_mesh(mesh);
  return mesh;
}

/// One counterclockwise triangle with all edges on the boundary (tag 0).
inline Mesh make_single_triangle(Vec2 a = {0, 0}, Vec2 b = {1, 0},
                                 Vec2 c = {0, 1}) {
  Mesh mesh;
  mesh.nodes = {a, b, c};
  mesh.triangles.push_back({0, 1, 2});
  mesh.boundary_edges.push_back({0, 1, 0});
  mesh.boundary_edges.push_back({1, 2, 0});
  mesh.boundary_edges.push_back({2, 0, 0});
  validate_mesh(mesh);
  return mesh;
}

inline std::string write_temp_file(const std::string& name,
                                   const std::string& contents) {
  const std::string path = "/tmp/" + name;
  std::ofstream os(path);
  os << contents;
  return path;
}

}  // namespace nefem::test
