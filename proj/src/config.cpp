#include "nefem/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace nefem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct KeyValue {
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(const std::string& path, int line,
                       const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line << ": " << what;
  throw ConfigError(os.str());
}

double to_double(const std::string& path, const KeyValue& kv) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    fail(path, kv.line, "expected a number, got '" + kv.value + "'");
  }
}

int to_int(const std::string& path, const KeyValue& kv) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    fail(path, kv.line, "expected an integer, got '" + kv.value + "'");
  }
}

bool to_bool(const std::string& path, const KeyValue& kv) {
  if (kv.value == "true" || kv.value == "1" || kv.value == "on") return true;
  if (kv.value == "false" || kv.value == "0" || kv.value == "off") return false;
  fail(path, kv.line, "expected true/false, got '" + kv.value + "'");
}

}  // namespace

CaseConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  std::map<std::string, KeyValue> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(path, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(path, line_no, "empty key or value");
    if (kv.count(key)) fail(path, line_no, "duplicate key '" + key + "'");
    kv[key] = {value, line_no};
  }

  CaseConfig cfg;
  cfg.path = path;
  auto take = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::optional<KeyValue>{};
    std::optional<KeyValue> out = it->second;
    kv.erase(it);
    return out;
  };
  auto require = [&](const std::string& key) {
    auto v = take(key);
    if (!v) throw ConfigError(path + ": missing required key '" + key + "'");
    return *v;
  };

  cfg.mesh_path = require("mesh").value;
  if (auto v = take("curves")) cfg.curves_path = v->value;
  if (auto v = take("mode")) {
    if (v->value == "nefem")
      cfg.mode = Mode::Nefem;
    else if (v->value == "sfem")
      cfg.mode = Mode::Sfem;
    else
      fail(path, v->line, "mode must be nefem or sfem");
  }

  // Boundary specs: "boundary.<tag> = kind [curve=<id>]".
  for (auto it = kv.begin(); it != kv.end();) {
    if (it->first.rfind("boundary.", 0) != 0) {
      ++it;
      continue;
    }
    const std::string tag_str = it->first.substr(9);
    int tag = 0;
    try {
      tag = std::stoi(tag_str);
    } catch (...) {
      fail(path, it->second.line, "bad boundary tag '" + tag_str + "'");
    }
    std::istringstream vs(it->second.value);
    std::string kind_tok, extra;
    vs >> kind_tok;
    CaseConfig::BoundarySpec spec;
    if (kind_tok == "inflow")
      spec.kind = BcKind::InflowDirichlet;
    else if (kind_tok == "outflow")
      spec.kind = BcKind::OutflowFree;
    else if (kind_tok == "slip")
      spec.kind = BcKind::Slip;
    else if (kind_tok == "noslip")
      spec.kind = BcKind::NoSlipAdiabatic;
    else
      fail(path, it->second.line,
           "boundary kind must be inflow|outflow|slip|noslip");
    while (vs >> extra) {
      if (extra.rfind("curve=", 0) == 0) {
        try {
          spec.curve = std::stoi(extra.substr(6));
        } catch (...) {
          fail(path, it->second.line, "bad curve id in '" + extra + "'");
        }
      } else {
        fail(path, it->second.line, "unexpected token '" + extra + "'");
      }
    }
    cfg.boundaries[tag] = spec;
    it = kv.erase(it);
  }

  if (auto v = take("freestream.rho")) cfg.freestream.rho = to_double(path, *v);
  if (auto v = take("freestream.u")) cfg.freestream.u = to_double(path, *v);
  if (auto v = take("freestream.v")) cfg.freestream.v = to_double(path, *v);
  if (auto v = take("freestream.e")) cfg.freestream.e = to_double(path, *v);
  if (auto v = take("freestream.lref")) cfg.freestream.lref = to_double(path, *v);

  if (auto v = take("gas.gamma")) cfg.gas.gamma = to_double(path, *v);
  if (auto v = take("gas.prandtl")) cfg.gas.prandtl = to_double(path, *v);
  if (auto v = take("gas.inviscid")) cfg.gas.inviscid = to_bool(path, *v);
  if (auto v = take("gas.mu")) cfg.gas.mu = to_double(path, *v);
  if (auto v = take("gas.reynolds")) cfg.reynolds = to_double(path, *v);
  if (cfg.reynolds > 0.0) {
    cfg.gas.inviscid = false;
    cfg.gas.mu =
        cfg.freestream.rho * cfg.freestream.speed() * cfg.freestream.lref /
        cfg.reynolds;
  }
  if (!cfg.gas.inviscid && cfg.gas.mu <= 0.0)
    throw ConfigError(path + ": viscous gas model needs gas.mu or gas.reynolds");

  SolverConfig& s = cfg.solver;
  if (auto v = take("solver.dt0")) s.dt0 = to_double(path, *v);
  if (auto v = take("solver.dt_growth")) s.dt_growth = to_double(path, *v);
  if (auto v = take("solver.dt_max")) s.dt_max = to_double(path, *v);
  if (auto v = take("solver.max_slabs")) s.max_slabs = to_int(path, *v);
  if (auto v = take("solver.steady_tol")) s.steady_tol = to_double(path, *v);
  if (auto v = take("solver.newton_tol")) s.newton_tol = to_double(path, *v);
  if (auto v = take("solver.newton_abs_tol"))
    s.newton_abs_tol = to_double(path, *v);
  if (auto v = take("solver.max_newton")) s.max_newton = to_int(path, *v);
  if (auto v = take("solver.line_search_max"))
    s.line_search_max = to_int(path, *v);
  if (auto v = take("solver.krylov_restart")) s.krylov.restart = to_int(path, *v);
  if (auto v = take("solver.krylov_tol")) s.krylov.tol = to_double(path, *v);
  if (auto v = take("solver.krylov_max_iters"))
    s.krylov.max_iters = to_int(path, *v);
  if (auto v = take("solver.retry_halvings")) s.retry_halvings = to_int(path, *v);
  if (auto v = take("solver.deterministic")) s.deterministic = to_bool(path, *v);
  if (auto v = take("solver.threads")) s.threads = to_int(path, *v);
  if (auto v = take("solver.standard_order"))
    s.quadrature.standard_order = to_int(path, *v);
  if (auto v = take("solver.nefem_points"))
    s.quadrature.nefem_points = to_int(path, *v);

  if (auto v = take("supg.enabled")) s.supg_enabled = to_bool(path, *v);
  if (auto v = take("dc.enabled")) s.dc_enabled = to_bool(path, *v);
  if (auto v = take("dc.clamp_factor")) s.dc_clamp = to_double(path, *v);

  if (auto v = take("output.dir")) cfg.output_dir = v->value;
  if (auto v = take("output.cadence")) cfg.output_cadence = to_int(path, *v);
  if (auto v = take("wall.coordinate")) {
    if (v->value == "theta")
      cfg.wall_coord = WallCoordinate::ThetaDegrees;
    else if (v->value == "xc")
      cfg.wall_coord = WallCoordinate::XOverC;
    else
      fail(path, v->line, "wall.coordinate must be theta or xc");
  }
  if (auto v = take("wall.center_x")) cfg.wall_center.x = to_double(path, *v);
  if (auto v = take("wall.center_y")) cfg.wall_center.y = to_double(path, *v);

  if (!kv.empty()) {
    const auto& first = *kv.begin();
    fail(path, first.second.line, "unknown key '" + first.first + "'");
  }

  if (!(s.dt0 > 0.0) || !(s.dt_max > 0.0))
    throw ConfigError(path + ": slab durations must be positive");
  if (s.max_slabs < 0) throw ConfigError(path + ": solver.max_slabs < 0");
  if (!(s.newton_tol > 0.0) || !(s.krylov.tol > 0.0))
    throw ConfigError(path + ": tolerances must be positive");
  return cfg;
}

}  // namespace nefem
