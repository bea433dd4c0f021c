#pragma once

#include "slotkit/cmt.hpp"
#include "slotkit/dbr.hpp"

#include <json.hpp>

#include <iosfwd>

namespace slotkit {

using json = nlohmann::ordered_json;

// CSV building blocks: shortest-exact number formatting, the producer tag
// appended to every row, and the two-comment-line file header. Command
// front-ends compose their own tables from these.
std::string csv_num(double v);
std::string csv_source_tag(const std::string& module);
void csv_begin(std::ostream& os, const std::string& module, const std::string& columns,
               const std::string& units);

// CSV emitters. Every file starts with a producer/version header and a units
// line; numbers are printed with max_digits10 so re-runs are byte-identical.
void write_index_map_csv(std::ostream& os, const IndexMap& map, const std::string& module);
void write_field_csv(std::ostream& os, const ModeSolution& mode, const std::string& module);
void write_matrix_csv(std::ostream& os, const MatrixXd& m, const std::string& module,
                      const std::string& units = "rad^2/um^2");
void write_sweep_csv(std::ostream& os, const std::vector<ReflectivitySweep>& sweeps,
                     const std::string& module);

// Read a whitespace- or comma-separated N x N matrix; throws ConfigError on
// ragged rows or a non-square result.
MatrixXd read_matrix(const std::string& path);

// JSON fragments.
json mode_summary_json(const std::vector<ModeSolution>& modes);
json tight_binding_json(const TightBindingReport& rep);
json matrix_json(const MatrixXd& m);

// FNV-1a 64-bit over the canonical (parsed and re-dumped, keys sorted) config
// text, so formatting and key order do not change the hash.
std::string config_hash(const json& config);

// Result envelope: tool name/version, config hash, creation timestamp and the
// payload. Everything except created_at is deterministic for a given config.
json make_envelope(const json& config, const std::string& command, json payload);

std::string iso8601_utc_now();

void write_text_file(const std::string& path, const std::string& text);

}  // namespace slotkit
