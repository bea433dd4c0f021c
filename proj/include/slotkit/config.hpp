#pragma once

#include "slotkit/geometry.hpp"
#include "slotkit/io.hpp"
#include "slotkit/modesolver.hpp"

#include <initializer_list>

namespace slotkit::cfg {

// Strict schema walking: every object is checked against its allowed key set,
// so a misspelled or unknown key fails with a message naming the key and the
// section it appeared in. Nothing is silently ignored.
void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed);

bool has(const json& obj, const char* key);
const json& require(const json& obj, const std::string& where, const char* key);
double require_number(const json& obj, const std::string& where, const char* key);
double number_or(const json& obj, const std::string& where, const char* key, double fallback);
int int_or(const json& obj, const std::string& where, const char* key, int fallback);
std::string require_string(const json& obj, const std::string& where, const char* key);
std::string string_or(const json& obj, const std::string& where, const char* key,
                      const std::string& fallback);

// "structure" and "grid" sections (config lengths in nm).
SlotArraySpec parse_structure(const json& obj);
GridSpec parse_grid(const json& obj);

// "solve" section merged with the run wavelength.
SolveRequest parse_solve(const json& obj, const std::string& where, double lambda_nm);

// A sweep axis: either an explicit array of numbers or {"min", "max", "step"}.
std::vector<double> parse_values(const json& v, const std::string& where);

struct Loaded {
  json config;
  std::string command;
};

// Read and parse a config file; requires the top-level "command" key.
Loaded load_config_file(const std::string& path);

}  // namespace slotkit::cfg
