#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vnls/cli.hpp"

namespace vnls::cli {

using json = nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) throw ConfigError(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

double real_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

int int_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

Complex complex_at(const json& j, const std::string& path) {
  if (j.is_number()) return {real_at(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected [re, im]");
  return {real_at(j[0], path + "[0]"), real_at(j[1], path + "[1]")};
}

ComplexRow row_at(const json& j, const std::string& path, int n) {
  if (!j.is_array()) throw ConfigError(path, "expected a list of complex entries");
  if (static_cast<int>(j.size()) != n) {
    throw ConfigError(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  }
  ComplexRow r(n);
  for (int i = 0; i < n; ++i) r(i) = complex_at(j[i], path + "[" + std::to_string(i) + "]");
  return r;
}

std::vector<ComplexRow> rows_at(const json& j, const std::string& path, int n) {
  if (!j.is_array()) throw ConfigError(path, "expected a list of row vectors");
  std::vector<ComplexRow> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(row_at(j[i], path + "[" + std::to_string(i) + "]", n));
  return out;
}

std::vector<int> signs_at(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected a list of +1/-1");
  std::vector<int> s;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const int v = int_at(j[i], path + "[" + std::to_string(i) + "]");
    if (v != 1 && v != -1) throw ConfigError(path + "[" + std::to_string(i) + "]", "sign must be +1 or -1");
    s.push_back(v);
  }
  return s;
}

BoundarySpec boundary_at(const json& j, int n) {
  const std::string path = "boundary";
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const json& kind = require(j, "kind", path);
  if (!kind.is_string()) throw ConfigError(path + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  BoundarySpec bc;
  if (k == "robin") {
    only_keys(j, path, {"kind", "alpha"});
    bc = BoundarySpec::robin(real_at(require(j, "alpha", path), path + ".alpha"));
  } else if (k == "mixed") {
    only_keys(j, path, {"kind", "signs"});
    bc = BoundarySpec::mixed(signs_at(require(j, "signs", path), path + ".signs"));
  } else if (k == "rotated") {
    only_keys(j, path, {"kind", "signs", "angles"});
    std::vector<int> signs = {1, -1};
    if (j.contains("signs")) signs = signs_at(j["signs"], path + ".signs");
    const json& a = require(j, "angles", path);
    if (!a.is_object()) throw ConfigError(path + ".angles", "expected {theta, zeta, xi}");
    only_keys(a, path + ".angles", {"theta", "zeta", "xi"});
    RotationAngles angles;
    angles.theta = real_at(require(a, "theta", path + ".angles"), path + ".angles.theta");
    if (a.contains("zeta")) angles.zeta = real_at(a["zeta"], path + ".angles.zeta");
    if (a.contains("xi")) angles.xi = real_at(a["xi"], path + ".angles.xi");
    bc = BoundarySpec::rotated(std::move(signs), angles);
  } else {
    throw ConfigError(path + ".kind", "expected \"robin\", \"mixed\" or \"rotated\"");
  }
  const ValidationReport rep = validate_boundary(bc, n);
  if (!rep.ok()) throw ConfigError(path, rep.summary());
  return bc;
}

Axis axis_at(const json& g, const char* lo, const char* hi, const char* count, Axis fallback) {
  Axis a = fallback;
  if (g.contains(lo)) a.min = real_at(g[lo], std::string("grid.") + lo);
  if (g.contains(hi)) a.max = real_at(g[hi], std::string("grid.") + hi);
  if (g.contains(count)) a.count = int_at(g[count], std::string("grid.") + count);
  if (a.count < 1) throw ConfigError(std::string("grid.") + count, "must be positive");
  if (a.count > 1 && !(a.max > a.min)) throw ConfigError(std::string("grid.") + hi, "axis must be increasing");
  return a;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of(text, e.byte > 0 ? e.byte - 1 : 0)),
                      std::string("malformed JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) throw ConfigError("document", "expected a JSON object");
  only_keys(doc, "", {"lambda", "n", "poles", "norming", "boundary", "mirror_norming", "grid", "tolerances",
                      "theta_scan", "output"});

  RunConfig cfg;
  cfg.data.lambda = doc.contains("lambda") ? int_at(doc["lambda"], "lambda") : -1;
  cfg.data.n = int_at(require(doc, "n", ""), "n");
  if (cfg.data.n < 1) throw ConfigError("n", "must be positive");

  const json& poles = require(doc, "poles", "");
  if (!poles.is_array()) throw ConfigError("poles", "expected a list of [re, im]");
  for (std::size_t i = 0; i < poles.size(); ++i) {
    cfg.data.poles.push_back(complex_at(poles[i], "poles[" + std::to_string(i) + "]"));
  }
  cfg.data.norming = rows_at(require(doc, "norming", ""), "norming", cfg.data.n);
  const ValidationReport rep = validate_spectral(cfg.data);
  if (!rep.ok()) throw ConfigError("poles/norming", rep.summary());

  if (doc.contains("boundary") && !doc["boundary"].is_null()) cfg.boundary = boundary_at(doc["boundary"], cfg.data.n);
  if (doc.contains("mirror_norming")) {
    if (!cfg.boundary) throw ConfigError("mirror_norming", "needs a boundary");
    cfg.mirror_norming = rows_at(doc["mirror_norming"], "mirror_norming", cfg.data.n);
    if (cfg.mirror_norming->size() != cfg.data.size()) {
      throw ConfigError("mirror_norming", "expected one row per pole");
    }
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_object()) throw ConfigError("grid", "expected an object");
    only_keys(g, "grid", {"x_min", "x_max", "n_x", "t_min", "t_max", "n_t"});
    cfg.grid.x = axis_at(g, "x_min", "x_max", "n_x", cfg.grid.x);
    cfg.grid.t = axis_at(g, "t_min", "t_max", "n_t", cfg.grid.t);
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances", "expected an object");
    only_keys(t, "tolerances", {"constraint", "pde_exponent_min", "pde_exponent_max", "boundary_value",
                                "boundary_derivative", "boundary_h", "mirror", "drift"});
    Tolerances& tol = cfg.tolerances;
    auto set = [&](const char* key, double& dst) {
      if (t.contains(key)) {
        dst = real_at(t[key], std::string("tolerances.") + key);
        if (!(dst > 0.0)) throw ConfigError(std::string("tolerances.") + key, "must be positive");
      }
    };
    set("constraint", tol.constraint);
    set("pde_exponent_min", tol.pde_exponent_min);
    set("pde_exponent_max", tol.pde_exponent_max);
    set("boundary_value", tol.boundary_value);
    set("boundary_derivative", tol.boundary_derivative);
    set("boundary_h", tol.boundary_h);
    set("mirror", tol.mirror);
    set("drift", tol.drift);
  }

  if (doc.contains("theta_scan")) {
    const json& s = doc["theta_scan"];
    if (!s.is_object()) throw ConfigError("theta_scan", "expected an object");
    only_keys(s, "theta_scan", {"zeta", "xi", "theta_min", "theta_max", "n_theta"});
    ThetaScanConfig ts;
    if (s.contains("zeta")) ts.zeta = real_at(s["zeta"], "theta_scan.zeta");
    if (s.contains("xi")) ts.xi = real_at(s["xi"], "theta_scan.xi");
    if (s.contains("theta_min")) ts.theta_min = real_at(s["theta_min"], "theta_scan.theta_min");
    if (s.contains("theta_max")) ts.theta_max = real_at(s["theta_max"], "theta_scan.theta_max");
    if (s.contains("n_theta")) ts.n_theta = int_at(s["n_theta"], "theta_scan.n_theta");
    if (ts.n_theta < 1) throw ConfigError("theta_scan.n_theta", "must be positive");
    if (ts.n_theta > 1 && !(ts.theta_max > ts.theta_min)) throw ConfigError("theta_scan.theta_max", "must exceed theta_min");
    cfg.theta_scan = ts;
  }

  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("output", "expected a path string");
    cfg.output_path = doc["output"].get<std::string>();
  }

  cfg.canonical = doc.dump();
  cfg.digest = fnv1a64_hex(cfg.canonical);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  std::string item;
  std::istringstream is{std::string(text)};
  while (std::getline(is, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ConfigError("--orders", "not an integer: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--orders", "empty list");
  return out;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream is{std::string(text)};
  while (std::getline(is, item, ',')) {
    std::istringstream one(item);
    one.imbue(std::locale::classic());
    double v = 0.0;
    one >> v;
    if (one.fail() || !one.eof() || !std::isfinite(v)) throw ConfigError("--times", "not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--times", "empty list");
  return out;
}

}  // namespace vnls::cli
