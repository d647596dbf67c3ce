#include "nefem/curve_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nefem {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char s[32];
    std::snprintf(s, sizeof s, "%.*g", prec, v);
    double back;
    std::sscanf(s, "%lf", &back);
    if (back == v) return s;
  }
  return buf;
}

struct LineReader {
  std::ifstream in;
  std::string path;
  int line_no = 0;

  explicit LineReader(const std::string& p) : in(p), path(p) {}

  // Next content line, stripped of comments; false at EOF.
  bool next(std::string& out) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      std::size_t i = 0;
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
        ++i;
      if (i == line.size()) continue;
      out = line;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << path << ":" << line_no << ": " << what;
    throw GeometryError(os.str());
  }
};

}  // namespace

CurveSet read_curves(const std::string& path) {
  LineReader rd(path);
  if (!rd.in) throw GeometryError("cannot open curve file: " + path);
  CurveSet out;
  std::string line;
  while (rd.next(line)) {
    std::istringstream hs(line);
    std::string kw_curve, kw_degree, kw_nctrl;
    int id = -1, degree = -1, nctrl = -1;
    hs >> kw_curve >> id >> kw_degree >> degree >> kw_nctrl >> nctrl;
    if (!hs || kw_curve != "curve" || kw_degree != "degree" ||
        kw_nctrl != "nctrl")
      rd.fail("expected 'curve <id> degree <p> nctrl <n>'");
    if (nctrl < degree + 1) rd.fail("nctrl must be at least degree+1");

    if (!rd.next(line)) rd.fail("missing knot line");
    std::istringstream ks(line);
    std::vector<double> knots;
    double v;
    while (ks >> v) knots.push_back(v);
    if (static_cast<int>(knots.size()) != nctrl + degree + 1)
      rd.fail("knot count must be nctrl+degree+1");

    std::vector<Vec2> pts(nctrl);
    std::vector<double> w(nctrl);
    for (int i = 0; i < nctrl; ++i) {
      if (!rd.next(line)) rd.fail("missing control point line");
      std::istringstream ps(line);
      if (!(ps >> pts[i].x >> pts[i].y >> w[i]))
        rd.fail("expected 'x y w'");
    }
    try {
      out.emplace(id, NurbsCurve(KnotVector(degree, knots), pts, w));
    } catch (const GeometryError& e) {
      rd.fail(e.what());
    }
  }
  if (out.empty()) throw GeometryError("curve file has no curves: " + path);
  return out;
}

void write_curves(const CurveSet& curves, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw GeometryError("cannot write curve file: " + path);
  for (const auto& [id, c] : curves) {
    const int n = static_cast<int>(c.control_points().size());
    os << "curve " << id << " degree " << c.degree() << " nctrl " << n << "\n";
    const auto& knots = c.knot_vector().knots();
    for (std::size_t i = 0; i < knots.size(); ++i)
      os << (i ? " " : "") << fmt_double(knots[i]);
    os << "\n";
    for (int i = 0; i < n; ++i) {
      os << fmt_double(c.control_points()[i].x) << " "
         << fmt_double(c.control_points()[i].y) << " "
         << fmt_double(c.weights()[i]) << "\n";
    }
  }
}

}  // namespace nefem
