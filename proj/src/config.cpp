#include "slotkit/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace slotkit::cfg {

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

bool has(const json& obj, const char* key) { return obj.is_object() && obj.contains(key); }

const json& require(const json& obj, const std::string& where, const char* key) {
  if (!has(obj, key))
    throw ConfigError("missing key '" + std::string(key) + "' in " + where);
  return obj.at(key);
}

double require_number(const json& obj, const std::string& where, const char* key) {
  const json& v = require(obj, where, key);
  if (!v.is_number())
    throw ConfigError("key '" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& where, const char* key, double fallback) {
  if (!has(obj, key)) return fallback;
  return require_number(obj, where, key);
}

int int_or(const json& obj, const std::string& where, const char* key, int fallback) {
  if (!has(obj, key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError("key '" + std::string(key) + "' in " + where + " must be an integer");
  return v.get<int>();
}

std::string require_string(const json& obj, const std::string& where, const char* key) {
  const json& v = require(obj, where, key);
  if (!v.is_string())
    throw ConfigError("key '" + std::string(key) + "' in " + where + " must be a string");
  return v.get<std::string>();
}

std::string string_or(const json& obj, const std::string& where, const char* key,
                      const std::string& fallback) {
  if (!has(obj, key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string())
    throw ConfigError("key '" + std::string(key) + "' in " + where + " must be a string");
  return v.get<std::string>();
}

namespace {

Material parse_material(const json& v, const std::string& where) {
  if (v.is_string()) return Material::named(v.get<std::string>());
  if (v.is_object()) {
    check_keys(v, where, {"name", "index"});
    Material m;
    m.name = require_string(v, where, "name");
    m.index = require_number(v, where, "index");
    if (m.index < 1.0) throw ConfigError(where + ".index must be at least 1");
    return m;
  }
  throw ConfigError(where + " must be a material name or {name, index}");
}

}  // namespace

SlotArraySpec parse_structure(const json& obj) {
  const std::string where = "structure";
  check_keys(obj, where,
             {"arrangement", "n_guides", "w_s_nm", "w_R_nm", "h_nm", "w_G_nm",
              "solid_width_nm", "rod_material", "cladding_material"});
  SlotArraySpec spec;
  spec.arrangement = arrangement_from_string(require_string(obj, where, "arrangement"));
  spec.n_guides = int_or(obj, where, "n_guides", spec.n_guides);
  spec.w_s = number_or(obj, where, "w_s_nm", spec.w_s);
  spec.w_R = number_or(obj, where, "w_R_nm", spec.w_R);
  spec.h = number_or(obj, where, "h_nm", spec.h);
  spec.w_G = number_or(obj, where, "w_G_nm", spec.w_G);
  spec.solid_width = number_or(obj, where, "solid_width_nm", spec.solid_width);
  if (has(obj, "rod_material"))
    spec.rod = parse_material(obj.at("rod_material"), where + ".rod_material");
  if (has(obj, "cladding_material"))
    spec.cladding = parse_material(obj.at("cladding_material"), where + ".cladding_material");
  spec.validate();
  return spec;
}

GridSpec parse_grid(const json& obj) {
  const std::string where = "grid";
  check_keys(obj, where, {"dx_nm", "dy_nm", "pad_x_nm", "pad_y_nm"});
  GridSpec grid;
  grid.dx = number_or(obj, where, "dx_nm", grid.dx);
  grid.dy = number_or(obj, where, "dy_nm", grid.dy);
  grid.pad_x = number_or(obj, where, "pad_x_nm", grid.pad_x);
  grid.pad_y = number_or(obj, where, "pad_y_nm", grid.pad_y);
  return grid;
}

SolveRequest parse_solve(const json& obj, const std::string& where, double lambda_nm) {
  check_keys(obj, where, {"num_modes", "n_eff_min", "n_eff_max"});
  SolveRequest req;
  req.lambda_nm = lambda_nm;
  req.num_modes = int_or(obj, where, "num_modes", req.num_modes);
  req.n_eff_min = number_or(obj, where, "n_eff_min", req.n_eff_min);
  req.n_eff_max = number_or(obj, where, "n_eff_max", req.n_eff_max);
  return req;
}

std::vector<double> parse_values(const json& v, const std::string& where) {
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(where + " entries must be numbers");
      out.push_back(e.get<double>());
    }
    if (out.empty()) throw ConfigError(where + " must not be empty");
    return out;
  }
  if (v.is_object()) {
    check_keys(v, where, {"min", "max", "step"});
    const double lo = require_number(v, where, "min");
    const double hi = require_number(v, where, "max");
    const double step = require_number(v, where, "step");
    if (step <= 0.0) throw ConfigError(where + ".step must be positive");
    if (hi < lo) throw ConfigError(where + ".max must not be below .min");
    std::vector<double> out;
    for (double x = lo; x <= hi + 1e-9 * step; x += step) out.push_back(x);
    return out;
  }
  throw ConfigError(where + " must be an array or {min, max, step}");
}

Loaded load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  Loaded loaded;
  try {
    loaded.config = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!loaded.config.is_object()) throw ConfigError("config root must be an object");
  loaded.command = require_string(loaded.config, "config", "command");
  return loaded;
}

}  // namespace slotkit::cfg
