#include <string>

#include "json.hpp"
#include "voidhom/errors.hpp"
#include "voidhom/harness.hpp"
#include "voidhom/report.hpp"

// JSON config parsing and serialization.  Parse errors carry JSON-pointer
// style paths so a bad field is directly addressable.
namespace voidhom {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& member(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "/" + key, "missing required field");
  return *it;
}

std::string get_string(const json& obj, const std::string& path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_string()) fail(path + "/" + key, "expected string");
  return v.get<std::string>();
}

double num_at(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected number");
  return v.get<double>();
}

double get_num(const json& obj, const std::string& path, const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return num_at(*it, path + "/" + key);
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) fail(path + "/" + key, "expected integer");
  return it->get<int>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) fail(path + "/" + key, "expected boolean");
  return it->get<bool>();
}

std::vector<double> get_num_list(const json& obj, const std::string& path, const char* key,
                                 bool require_positive) {
  std::vector<double> out;
  auto it = obj.find(key);
  if (it == obj.end()) return out;
  if (!it->is_array()) fail(path + "/" + key, "expected array of numbers");
  for (size_t i = 0; i < it->size(); ++i) {
    std::string p = path + "/" + key + "/" + std::to_string(i);
    double v = num_at((*it)[i], p);
    if (require_positive && !(v > 0.0)) fail(p, "expected positive number");
    out.push_back(v);
  }
  return out;
}

Vec2 vec2_at(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [x, y]");
  return {num_at(v[0], path + "/0"), num_at(v[1], path + "/1")};
}

Mat2 mat2_at(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [[a, b], [c, d]]");
  Mat2 m;
  for (size_t r = 0; r < 2; ++r) {
    std::string rp = path + "/" + std::to_string(r);
    if (!v[r].is_array() || v[r].size() != 2) fail(rp, "expected [a, b]");
    m.m[r][0] = num_at(v[r][0], rp + "/0");
    m.m[r][1] = num_at(v[r][1], rp + "/1");
  }
  return m;
}

DensityConfig parse_density(const json& obj, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected object");
  DensityConfig d;
  d.family = get_string(obj, path, "family");
  static const char* kFamilies[] = {"constant",       "stripes",  "sin",        "counterexample",
                                    "aniso-l1",       "aniso-dip", "laminate",  "quadratic"};
  bool known = false;
  for (const char* f : kFamilies) known = known || d.family == f;
  if (!known) fail(path + "/family", "unknown density family '" + d.family + "'");
  d.value = get_num(obj, path, "value", d.value);
  d.low = get_num(obj, path, "low", d.low);
  d.high = get_num(obj, path, "high", d.high);
  d.base = get_num(obj, path, "base", d.base);
  d.amplitude = get_num(obj, path, "amplitude", d.amplitude);
  d.cheap = get_num(obj, path, "cheap", d.cheap);
  d.expensive = get_num(obj, path, "expensive", d.expensive);
  d.period = get_num(obj, path, "period", d.period);
  if (auto it = obj.find("normal"); it != obj.end()) d.normal = vec2_at(*it, path + "/normal");
  d.scalar_mode = get_bool(obj, path, "scalar_mode", d.scalar_mode);
  d.scale_by_eps = get_bool(obj, path, "scale_by_eps", d.scale_by_eps);
  d.line_halfwidth_cells = get_num(obj, path, "line_halfwidth_cells", d.line_halfwidth_cells);
  if (!(d.period > 0.0)) fail(path + "/period", "expected positive number");
  return d;
}

Expectation parse_expectation(const json& obj, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected object");
  Expectation e;
  e.name = get_string(obj, path, "name");
  e.datum = get_string(obj, path, "datum");
  e.quantity = get_string(obj, path, "quantity");
  if (e.quantity != "estimate" && e.quantity != "companion-2g" && e.quantity != "gap-vs-2g")
    fail(path + "/quantity", "expected estimate | companion-2g | gap-vs-2g");
  e.op = get_string(obj, path, "op");
  if (e.op != "close" && e.op != "interval" && e.op != "at-least" && e.op != "at-most")
    fail(path + "/op", "expected close | interval | at-least | at-most");
  e.value = get_num(obj, path, "value", 0.0);
  e.lo = get_num(obj, path, "lo", 0.0);
  e.hi = get_num(obj, path, "hi", 0.0);
  e.rel = get_num(obj, path, "rel", 0.0);
  e.abs = get_num(obj, path, "abs", 0.0);
  e.add_budget = get_bool(obj, path, "add_budget", false);
  return e;
}

json density_to_json(const DensityConfig& d) {
  json j;
  j["family"] = d.family;
  j["value"] = d.value;
  j["low"] = d.low;
  j["high"] = d.high;
  j["base"] = d.base;
  j["amplitude"] = d.amplitude;
  j["cheap"] = d.cheap;
  j["expensive"] = d.expensive;
  j["period"] = d.period;
  j["normal"] = {d.normal.x, d.normal.y};
  j["scalar_mode"] = d.scalar_mode;
  j["scale_by_eps"] = d.scale_by_eps;
  j["line_halfwidth_cells"] = d.line_halfwidth_cells;
  return j;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("/: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("/", "expected top-level object");

  ExperimentConfig c;
  c.scenario = get_string(root, "", "scenario");
  c.kind = get_string(root, "", "kind");
  if (c.kind != "bulk" && c.kind != "void" && c.kind != "jump" && c.kind != "gbv" &&
      c.kind != "fqc")
    fail("/kind", "expected bulk | void | jump | gbv | fqc");

  c.density = parse_density(member(root, "", "density"), "/density");

  std::string shape = "disc";
  if (root.contains("shape")) shape = get_string(root, "", "shape");
  if (shape == "disc")
    c.shape = Shape::Disc;
  else if (shape == "square")
    c.shape = Shape::Square;
  else
    fail("/shape", "expected disc | square");

  if (auto it = root.find("nu_list"); it != root.end()) {
    if (!it->is_array()) fail("/nu_list", "expected array");
    for (size_t i = 0; i < it->size(); ++i)
      c.nu_list.push_back(vec2_at((*it)[i], "/nu_list/" + std::to_string(i)));
  }
  if (auto it = root.find("xi_list"); it != root.end()) {
    if (!it->is_array()) fail("/xi_list", "expected array");
    for (size_t i = 0; i < it->size(); ++i)
      c.xi_list.push_back(mat2_at((*it)[i], "/xi_list/" + std::to_string(i)));
  }
  c.rho_list = get_num_list(root, "", "rho_list", true);
  c.eps_list = get_num_list(root, "", "eps_list", true);
  c.r_list = get_num_list(root, "", "r_list", true);

  c.cells_per_rho = get_int(root, "", "cells_per_rho", c.cells_per_rho);
  c.cells_per_period = get_int(root, "", "cells_per_period", c.cells_per_period);
  c.stencil = get_int(root, "", "stencil", c.stencil);
  if (c.stencil != 8 && c.stencil != 16) fail("/stencil", "expected 8 or 16");
  c.collar_fraction = get_num(root, "", "collar_fraction", c.collar_fraction);
  c.collar_cells = get_int(root, "", "collar_cells", c.collar_cells);
  c.gbv_resolution = get_int(root, "", "gbv_resolution", c.gbv_resolution);
  c.fqc_resolution = get_int(root, "", "fqc_resolution", c.fqc_resolution);

  if (auto it = root.find("expectations"); it != root.end()) {
    if (!it->is_array()) fail("/expectations", "expected array");
    for (size_t i = 0; i < it->size(); ++i)
      c.expectations.push_back(
          parse_expectation((*it)[i], "/expectations/" + std::to_string(i)));
  }

  // Kind-specific structural requirements.
  bool surface_kind = c.kind == "void" || c.kind == "jump" || c.kind == "gbv";
  if (surface_kind && c.nu_list.empty()) fail("/nu_list", "required for kind " + c.kind);
  if (!surface_kind && c.xi_list.empty()) fail("/xi_list", "required for kind " + c.kind);
  if ((c.kind == "void" || c.kind == "jump") && c.rho_list.empty())
    fail("/rho_list", "required for kind " + c.kind);
  if (c.kind == "bulk" && c.r_list.empty() && c.rho_list.empty())
    fail("/r_list", "bulk needs r_list or rho_list");
  if (c.cells_per_rho <= 0) fail("/cells_per_rho", "expected positive integer");
  if (c.cells_per_period < 0) fail("/cells_per_period", "expected nonnegative integer");
  if (c.kind == "bulk" && !c.r_list.empty() && c.cells_per_period <= 0)
    fail("/cells_per_period", "growing-window bulk sweeps need cells_per_period");
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["kind"] = c.kind;
  j["shape"] = c.shape == Shape::Disc ? "disc" : "square";
  j["density"] = density_to_json(c.density);
  {
    json l = json::array();
    for (Vec2 v : c.nu_list) l.push_back({v.x, v.y});
    j["nu_list"] = l;
  }
  {
    json l = json::array();
    for (const Mat2& m : c.xi_list)
      l.push_back({{m.m[0][0], m.m[0][1]}, {m.m[1][0], m.m[1][1]}});
    j["xi_list"] = l;
  }
  j["rho_list"] = c.rho_list;
  j["eps_list"] = c.eps_list;
  j["r_list"] = c.r_list;
  j["cells_per_rho"] = c.cells_per_rho;
  j["cells_per_period"] = c.cells_per_period;
  j["stencil"] = c.stencil;
  j["collar_fraction"] = c.collar_fraction;
  j["collar_cells"] = c.collar_cells;
  j["gbv_resolution"] = c.gbv_resolution;
  j["fqc_resolution"] = c.fqc_resolution;
  {
    json l = json::array();
    for (const Expectation& e : c.expectations) {
      json ej;
      ej["name"] = e.name;
      ej["datum"] = e.datum;
      ej["quantity"] = e.quantity;
      ej["op"] = e.op;
      ej["value"] = e.value;
      ej["lo"] = e.lo;
      ej["hi"] = e.hi;
      ej["rel"] = e.rel;
      ej["abs"] = e.abs;
      ej["add_budget"] = e.add_budget;
      l.push_back(ej);
    }
    j["expectations"] = l;
  }
  return j.dump(2) + "\n";
}

std::string nu_label(Vec2 nu) {
  return "nu=(" + format_value(nu.x) + ";" + format_value(nu.y) + ")";
}

std::string xi_label(const Mat2& xi) {
  return "xi=[[" + format_value(xi.m[0][0]) + ";" + format_value(xi.m[0][1]) + "];[" +
         format_value(xi.m[1][0]) + ";" + format_value(xi.m[1][1]) + "]]";
}

}  // namespace voidhom
