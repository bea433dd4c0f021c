#include "slotkit/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace slotkit {

namespace {

// Shortest round-trip-exact decimal form, reused everywhere so re-runs are
// byte-identical.
std::string num(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string source_tag(const std::string& module) {
  return module + "@" + kToolVersion;
}

void csv_header(std::ostream& os, const std::string& module, const std::string& columns,
                const std::string& units) {
  os << "# " << kToolName << " " << kToolVersion << " " << module << "\n";
  os << "# units: " << units << "\n";
  os << columns << ",source\n";
}

}  // namespace

std::string csv_num(double v) { return num(v); }

std::string csv_source_tag(const std::string& module) { return source_tag(module); }

void csv_begin(std::ostream& os, const std::string& module, const std::string& columns,
               const std::string& units) {
  csv_header(os, module, columns, units);
}

void write_index_map_csv(std::ostream& os, const IndexMap& map, const std::string& module) {
  csv_header(os, module, "x_um,y_um,n", "lengths um, n dimensionless");
  const std::string tag = source_tag(module);
  for (int i = 0; i < map.nx; ++i)
    for (int j = 0; j < map.ny; ++j)
      os << num(nm_to_um(map.cell_x(i))) << "," << num(nm_to_um(map.cell_y(j))) << ","
         << num(std::sqrt(map.eps(i, j))) << "," << tag << "\n";
}

void write_field_csv(std::ostream& os, const ModeSolution& mode, const std::string& module) {
  csv_header(os, module, "x_um,y_um,E_x", "lengths um, E_x peak-normalised");
  const std::string tag = source_tag(module);
  const auto& g = mode.grid;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      os << num(nm_to_um(g.origin_x + (i + 0.5) * g.dx)) << ","
         << num(nm_to_um(g.origin_y + (j + 0.5) * g.dy)) << "," << num(mode.field(i, j)) << ","
         << tag << "\n";
}

void write_matrix_csv(std::ostream& os, const MatrixXd& m, const std::string& module,
                      const std::string& units) {
  os << "# " << kToolName << " " << kToolVersion << " " << module << "\n";
  os << "# units: " << units << "\n";
  const std::string tag = source_tag(module);
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) os << num(m(i, j)) << ",";
    os << tag << "\n";
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<ReflectivitySweep>& sweeps,
                     const std::string& module) {
  csv_header(os, module, "n_periods,period_um,R,T", "lengths um, R and T dimensionless");
  const std::string tag = source_tag(module);
  for (const auto& sweep : sweeps)
    for (std::size_t b = 0; b < sweep.period_nm.size(); ++b)
      os << num(sweep.n_periods) << "," << num(nm_to_um(sweep.period_nm[b])) << ","
         << num(sweep.R[b]) << "," << num(1.0 - sweep.R[b]) << "," << tag << "\n";
}

MatrixXd read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    std::vector<double> row;
    try {
      std::size_t used = 0;
      row.push_back(std::stod(first, &used));
      if (used != first.size()) throw std::invalid_argument(first);
      std::string tok;
      while (ls >> tok) {
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      }
    } catch (const std::logic_error&) {
      throw ConfigError("matrix file " + path + " holds a non-numeric entry");
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError("matrix file " + path + " has ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("matrix file " + path + " holds no data");
  if (rows.size() != rows.front().size())
    throw ConfigError("matrix file " + path + " is not square");
  MatrixXd m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

json mode_summary_json(const std::vector<ModeSolution>& modes) {
  json out = json::array();
  for (const auto& mode : modes) {
    json entry;
    entry["n_eff"] = mode.n_eff;
    entry["beta_rad_per_um"] = mode.beta;
    entry["lambda_um"] = nm_to_um(mode.lambda_nm);
    entry["guided"] = mode.guided;
    entry["degenerate_pair"] = mode.degenerate_pair;
    entry["residual_rad2_per_um2"] = mode.residual;
    entry["grid"] = {{"nx", mode.grid.nx},
                     {"ny", mode.grid.ny},
                     {"dx_um", nm_to_um(mode.grid.dx)},
                     {"dy_um", nm_to_um(mode.grid.dy)},
                     {"origin_x_um", nm_to_um(mode.grid.origin_x)},
                     {"origin_y_um", nm_to_um(mode.grid.origin_y)}};
    out.push_back(std::move(entry));
  }
  return out;
}

json tight_binding_json(const TightBindingReport& rep) {
  return {{"nn_coupling_rad2_per_um2", rep.nn_coupling},
          {"nnn_ratio", rep.nnn_ratio},
          {"asymmetry", rep.asymmetry},
          {"self_coupling_rad2_per_um2", rep.self_coupling},
          {"verdict", rep.verdict}};
}

json matrix_json(const MatrixXd& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string config_hash(const json& config) {
  // Canonical form: plain json sorts keys, so spacing and order never matter.
  const nlohmann::json canonical = config;
  const std::string text = canonical.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

json make_envelope(const json& config, const std::string& command, json payload) {
  json env;
  env["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  env["command"] = command;
  env["config_hash"] = config_hash(config);
  env["created_at"] = iso8601_utc_now();
  env["config"] = config;
  env["payload"] = std::move(payload);
  return env;
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << text;
  if (!out) throw ConfigError("failed writing output file: " + path);
}

}  // namespace slotkit
