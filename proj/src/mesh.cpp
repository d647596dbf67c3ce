#include "nefem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace nefem {

double Mesh::diameter() const {
  if (nodes.empty()) return 0.0;
  Vec2 lo = nodes.front(), hi = nodes.front();
  for (const Vec2& p : nodes) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  return (hi - lo).norm();
}

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line << ": " << what;
  throw MeshError(os.str());
}

}  // namespace

void validate_mesh(Mesh& mesh) {
  const int nn = mesh.n_nodes();
  const double scale = mesh.diameter();

  for (int t = 0; t < mesh.n_triangles(); ++t) {
    auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nn)
        throw MeshError("triangle " + std::to_string(t) + ": node id out of range");
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw MeshError("triangle " + std::to_string(t) + ": repeated node");
    double area = mesh.triangle_area(t);
    if (area < 0.0) {
      std::swap(tri[1], tri[2]);  // reorient to counterclockwise
      area = -area;
    }
    if (!(area > 1e-14 * scale * scale))
      throw MeshError("triangle " + std::to_string(t) + ": degenerate area");
  }

  // Each directed interior edge appears once per adjacent triangle; a
  // boundary edge must belong to exactly one.
  std::map<std::pair<int, int>, int> edge_owner;  // directed edge -> triangle
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const auto key = std::make_pair(tri[k], tri[(k + 1) % 3]);
      if (edge_owner.count(key))
        throw MeshError("duplicate directed edge; inconsistent orientation");
      edge_owner[key] = t;
    }
  }
  for (auto& be : mesh.boundary_edges) {
    const bool fwd = edge_owner.count({be.a, be.b}) > 0;
    const bool rev = edge_owner.count({be.b, be.a}) > 0;
    if (fwd && rev)
      throw MeshError("boundary edge " + std::to_string(be.a) + "-" +
                      std::to_string(be.b) + " is interior (two triangles)");
    if (!fwd && !rev)
      throw MeshError("boundary edge " + std::to_string(be.a) + "-" +
                      std::to_string(be.b) + " matches no triangle");
    if (!fwd) std::swap(be.a, be.b);  // domain-on-the-left direction
  }

  // Loop closure of the union of boundary edges: balanced degrees, and
  // every triangle edge without a neighbour is listed exactly once.
  std::map<std::pair<int, int>, int> listed;
  std::map<int, int> degree;
  for (const auto& be : mesh.boundary_edges) {
    if (++listed[{be.a, be.b}] > 1) throw MeshError("boundary edge listed twice");
    degree[be.a] += 1;
    degree[be.b] -= 1;
  }
  for (const auto& [node, d] : degree) {
    if (d != 0)
      throw MeshError("boundary loops not closed at node " + std::to_string(node));
  }
  for (const auto& [edge, t] : edge_owner) {
    if (!edge_owner.count({edge.second, edge.first}) && !listed.count(edge))
      throw MeshError("untagged boundary edge " + std::to_string(edge.first) +
                      "-" + std::to_string(edge.second));
  }
  (void)nn;
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file: " + path);
  int line_no = 0;
  auto next_line = [&](std::string& out) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      out = line;
      return true;
    }
    return false;
  };

  std::string line;
  if (!next_line(line)) fail(path, line_no, "empty mesh file");
  std::istringstream hs(line);
  std::string kw_nodes, kw_tris, kw_bedges;
  long n = 0, t = 0, b = 0;
  hs >> kw_nodes >> n >> kw_tris >> t >> kw_bedges >> b;
  if (!hs || kw_nodes != "nodes" || kw_tris != "triangles" || kw_bedges != "bedges")
    fail(path, line_no, "expected header 'nodes N triangles T bedges B'");

  Mesh mesh;
  mesh.nodes.resize(n);
  for (long i = 0; i < n; ++i) {
    if (!next_line(line)) fail(path, line_no, "missing node line");
    std::istringstream s(line);
    if (!(s >> mesh.nodes[i].x >> mesh.nodes[i].y))
      fail(path, line_no, "expected 'x y'");
  }
  mesh.triangles.resize(t);
  for (long i = 0; i < t; ++i) {
    if (!next_line(line)) fail(path, line_no, "missing triangle line");
    std::istringstream s(line);
    if (!(s >> mesh.triangles[i][0] >> mesh.triangles[i][1] >> mesh.triangles[i][2]))
      fail(path, line_no, "expected 'a b c'");
  }
  mesh.boundary_edges.resize(b);
  for (long i = 0; i < b; ++i) {
    if (!next_line(line)) fail(path, line_no, "missing boundary edge line");
    std::istringstream s(line);
    auto& be = mesh.boundary_edges[i];
    if (!(s >> be.a >> be.b >> be.tag)) fail(path, line_no, "expected 'a b tag'");
  }
  try {
    validate_mesh(mesh);
  } catch (const MeshError& e) {
    throw MeshError(path + ": " + e.what());
  }
  return mesh;
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw MeshError("cannot write mesh file: " + path);
  os << "nodes " << mesh.n_nodes() << " triangles " << mesh.n_triangles()
     << " bedges " << mesh.boundary_edges.size() << "\n";
  char buf[64];
  for (const Vec2& p : mesh.nodes) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    os << buf;
  }
  for (const auto& tri : mesh.triangles)
    os << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  for (const auto& be : mesh.boundary_edges)
    os << be.a << " " << be.b << " " << be.tag << "\n";
}

double element_size(const Mesh& mesh, int triangle) {
  return std::sqrt(4.0 * mesh.triangle_area(triangle) / std::sqrt(3.0));
}

}  // namespace nefem
