// Command-line front end: strict JSON configs in, ResultEnvelope JSON (or CSV
// tables) out. Exit codes: 0 ok, 2 config error, 3 solver failure, 1 anything
// else, always with a machine-readable error record on stdout.

#include "slotkit/config.hpp"
#include "slotkit/design.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace slotkit;

// Thread count comes from SLOTKIT_THREADS only; results are bit-identical for
// any value because sweep writes are by-index.
int thread_count() {
  const char* env = std::getenv("SLOTKIT_THREADS");
  if (env == nullptr) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<int>(std::min(hw, 4u));
  }
  const std::string text(env);
  std::size_t pos = 0;
  int n = 0;
  try {
    n = std::stoi(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || n < 1)
    throw ConfigError("SLOTKIT_THREADS must be a positive integer, got '" + text + "'");
  return n;
}

struct OutputSpec {
  std::string path;             // empty -> stdout
  std::string format = "json";  // json | csv
};

OutputSpec parse_output(const json& config, const std::string& cli_path,
                        const std::string& cli_format) {
  OutputSpec out;
  if (cfg::has(config, "output")) {
    const json& o = config.at("output");
    cfg::check_keys(o, "output", {"path", "format"});
    out.path = cfg::string_or(o, "output", "path", "");
    out.format = cfg::string_or(o, "output", "format", "json");
  }
  if (!cli_path.empty()) out.path = cli_path;
  if (!cli_format.empty()) out.format = cli_format;
  if (out.format != "json" && out.format != "csv")
    throw ConfigError("output format must be 'json' or 'csv', got '" + out.format + "'");
  return out;
}

void deliver(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(path, text);
  }
}

void deliver_envelope(const json& config, const std::string& command, json payload,
                      const OutputSpec& out) {
  deliver(make_envelope(config, command, std::move(payload)).dump(2) + "\n", out.path);
}

double parse_wavelength(const json& config) {
  const double lambda = cfg::number_or(config, "config", "wavelength_nm", 637.0);
  if (lambda <= 0.0) throw ConfigError("wavelength_nm must be positive");
  return lambda;
}

SlotArraySpec parse_structure_section(const json& config) {
  return cfg::parse_structure(cfg::require(config, "config", "structure"));
}

GridSpec parse_grid_section(const json& config) {
  if (!cfg::has(config, "grid")) return GridSpec{};
  return cfg::parse_grid(config.at("grid"));
}

SolveRequest parse_solve_section(const json& config, double lambda_nm) {
  if (!cfg::has(config, "solve")) {
    SolveRequest req;
    req.lambda_nm = lambda_nm;
    return req;
  }
  return cfg::parse_solve(config.at("solve"), "solve", lambda_nm);
}

// Mirror-length plumbing shared by `couple` and `modevol`: either L_hat_um
// directly, or L_c_um plus a grating contribution (L_eff_um, or L_gr_um with
// the reflectivity to fold through the penetration-depth formula).
double resolve_adjusted_length(const json& sec, const std::string& where, double R,
                               json& echo) {
  if (cfg::has(sec, "L_hat_um")) {
    if (cfg::has(sec, "L_c_um") || cfg::has(sec, "L_eff_um") || cfg::has(sec, "L_gr_um"))
      throw ConfigError(where + " takes either L_hat_um or the L_c_um/L_eff_um/L_gr_um form, not both");
    const double L_hat = cfg::require_number(sec, where, "L_hat_um");
    echo["L_hat_um"] = L_hat;
    return L_hat;
  }
  const double L_c = cfg::number_or(sec, where, "L_c_um", 0.0);
  double L_eff = 0.0;
  if (cfg::has(sec, "L_gr_um") && cfg::has(sec, "L_eff_um"))
    throw ConfigError("give either L_gr_um or L_eff_um in " + where + ", not both");
  if (cfg::has(sec, "L_gr_um")) {
    const double L_gr = cfg::require_number(sec, where, "L_gr_um");
    L_eff = effective_length(L_gr, R);
    echo["L_gr_um"] = L_gr;
  } else {
    L_eff = cfg::number_or(sec, where, "L_eff_um", 0.0);
  }
  echo["L_c_um"] = L_c;
  echo["L_eff_um"] = L_eff;
  const double L_hat = adjusted_length(L_c, L_eff);
  echo["L_hat_um"] = L_hat;
  return L_hat;
}

int run_modes(const json& config, const OutputSpec& out) {
  cfg::check_keys(config, "config",
                  {"command", "structure", "grid", "wavelength_nm", "solve", "output"});
  const double lambda = parse_wavelength(config);
  const SlotArraySpec spec = parse_structure_section(config);
  const GridSpec grid = parse_grid_section(config);
  const SolveRequest req = parse_solve_section(config, lambda);

  const IndexMap map = build_cross_section(spec, grid);
  const std::vector<ModeSolution> modes = solve_te_modes(map, req);

  if (out.format == "csv") {
    if (modes.size() != 1)
      throw ConfigError("csv output writes one mode field; request exactly one mode or use json");
    std::ostringstream ss;
    write_field_csv(ss, modes.front(), "modes");
    deliver(ss.str(), out.path);
    return 0;
  }
  json payload;
  payload["lambda_nm"] = lambda;
  payload["arrangement"] = to_string(spec.arrangement);
  payload["n_modes"] = modes.size();
  payload["modes"] = mode_summary_json(modes);
  deliver_envelope(config, "modes", std::move(payload), out);
  return 0;
}

int run_couple(const json& config, const OutputSpec& out) {
  cfg::check_keys(config, "config",
                  {"command", "wavelength_nm", "lateral", "end_to_end", "output"});
  if (out.format == "csv") throw ConfigError("couple emits json only");
  const double lambda = parse_wavelength(config);
  json payload;
  payload["lambda_nm"] = lambda;
  bool any = false;

  if (cfg::has(config, "lateral")) {
    const json& l = config.at("lateral");
    cfg::check_keys(l, "lateral", {"kappa_rad2_per_um2", "n_eff"});
    const double kappa = cfg::require_number(l, "lateral", "kappa_rad2_per_um2");
    const double n_eff = cfg::require_number(l, "lateral", "n_eff");
    json block;
    block["kappa_rad2_per_um2"] = kappa;
    block["n_eff"] = n_eff;
    block["J_L_rad_per_s"] = lateral_rate(kappa, n_eff, lambda);
    payload["lateral"] = std::move(block);
    any = true;
  }
  if (cfg::has(config, "end_to_end")) {
    const json& e = config.at("end_to_end");
    cfg::check_keys(e, "end_to_end",
                    {"R", "N_eff", "L_c_um", "L_gr_um", "L_eff_um", "L_hat_um"});
    const double R = cfg::require_number(e, "end_to_end", "R");
    const double N_eff = cfg::require_number(e, "end_to_end", "N_eff");
    json block;
    block["R"] = R;
    block["T"] = 1.0 - R;
    block["N_eff"] = N_eff;
    const double L_hat = resolve_adjusted_length(e, "end_to_end", R, block);
    block["tau_s"] = cavity_lifetime(L_hat, N_eff);
    block["J_E_rad_per_s"] = end_to_end_rate(R, L_hat, N_eff);
    if (1.0 - R > 0.1)
      block["notes"] = json::array(
          {"transmission 1-R exceeds 0.1; the weak-transmission rate formula is stretched here"});
    payload["end_to_end"] = std::move(block);
    any = true;
  }
  if (!any) throw ConfigError("config needs a 'lateral' or 'end_to_end' section");
  deliver_envelope(config, "couple", std::move(payload), out);
  return 0;
}

int run_nacmt(const json& config, const OutputSpec& out) {
  cfg::check_keys(config, "config",
                  {"command", "structure", "grid", "wavelength_nm", "solve", "matrix_file",
                   "beta_ref_per_um", "output"});
  const double lambda = parse_wavelength(config);
  CouplingMatrix cm;
  json payload;
  payload["lambda_nm"] = lambda;

  if (cfg::has(config, "matrix_file")) {
    if (cfg::has(config, "structure"))
      throw ConfigError("give either 'matrix_file' or 'structure', not both");
    cm.M = read_matrix(cfg::require_string(config, "config", "matrix_file"));
    cm.beta_ref = cfg::number_or(config, "config", "beta_ref_per_um", 0.0);
  } else if (cfg::has(config, "structure")) {
    const SlotArraySpec spec = parse_structure_section(config);
    const GridSpec grid = parse_grid_section(config);
    if (spec.arrangement == Arrangement::solid_rod)
      throw ConfigError("nacmt needs slotted guides, not a solid rod");
    const int slots = static_cast<int>(spec.slot_centers().size());
    SolveRequest req = parse_solve_section(config, lambda);
    if (cfg::has(config, "solve") && cfg::has(config.at("solve"), "num_modes") &&
        req.num_modes != slots)
      throw ConfigError("nacmt solves exactly one supermode per slot (" +
                        std::to_string(slots) + " here); drop solve.num_modes");
    req.num_modes = slots;

    const IndexMap map = build_cross_section(spec, grid);
    const SupermodeSet set = collect_supermodes(map, req);

    SolveRequest iso_req = req;
    iso_req.num_modes = 1;
    const IndexMap one = build_single_guide(spec, grid, 0);
    const std::vector<ModeSolution> iso = solve_te_modes(one, iso_req);
    if (iso.empty()) throw SolveError("isolated guide supports no guided mode");

    const AmplitudeMatrix amp = extract_amplitudes(set);
    std::vector<double> chi;
    json chi_json = json::array(), neff_json = json::array();
    for (const ModeSolution& m : set.modes) {
      chi.push_back(m.beta);
      chi_json.push_back(m.beta);
      neff_json.push_back(m.n_eff);
    }
    cm = nacmt(amp, chi, iso.front().beta);
    payload["n_eff_isolated"] = iso.front().n_eff;
    payload["chi_per_um"] = std::move(chi_json);
    payload["supermode_n_eff"] = std::move(neff_json);
    payload["condition_number"] = amp.condition_number;
  } else {
    throw ConfigError("config needs a 'structure' or 'matrix_file' entry");
  }

  if (out.format == "csv") {
    std::ostringstream ss;
    write_matrix_csv(ss, cm.M, "nacmt");
    deliver(ss.str(), out.path);
    return 0;
  }
  const TightBindingReport rep = analyze_tight_binding(cm);
  payload["beta_ref_per_um"] = cm.beta_ref;
  payload["M_rad2_per_um2"] = matrix_json(cm.M);
  payload["tight_binding"] = tight_binding_json(rep);
  if (!cm.notes.empty()) payload["notes"] = cm.notes;
  deliver_envelope(config, "nacmt", std::move(payload), out);
  return 0;
}

int run_dbr(const json& config, const OutputSpec& out) {
  cfg::check_keys(config, "config", {"command", "wavelength_nm", "grating", "sweep", "output"});
  const double lambda = parse_wavelength(config);
  const json& g = cfg::require(config, "config", "grating");
  cfg::check_keys(g, "grating", {"period_nm", "n_periods", "duty", "n_lo", "n_hi", "surround"});
  const double n_lo = cfg::require_number(g, "grating", "n_lo");
  const double n_hi = cfg::require_number(g, "grating", "n_hi");
  const double duty = cfg::number_or(g, "grating", "duty", 0.5);
  const double surround = cfg::number_or(g, "grating", "surround", n_lo);

  if (cfg::has(config, "sweep")) {
    if (cfg::has(g, "period_nm") || cfg::has(g, "n_periods"))
      throw ConfigError("period_nm and n_periods belong in 'sweep' when sweeping");
    const json& s = config.at("sweep");
    cfg::check_keys(s, "sweep", {"period_nm", "n_periods"});
    const std::vector<double> periods =
        cfg::parse_values(cfg::require(s, "sweep", "period_nm"), "sweep.period_nm");
    const std::vector<double> counts =
        cfg::parse_values(cfg::require(s, "sweep", "n_periods"), "sweep.n_periods");
    const std::vector<ReflectivitySweep> sweeps =
        reflectivity_sweep(periods, counts, duty, n_lo, n_hi, surround, lambda, thread_count());
    if (out.format == "csv") {
      std::ostringstream ss;
      write_sweep_csv(ss, sweeps, "dbr");
      deliver(ss.str(), out.path);
      return 0;
    }
    json payload;
    payload["lambda_nm"] = lambda;
    payload["n_lo"] = n_lo;
    payload["n_hi"] = n_hi;
    payload["duty"] = duty;
    payload["surround"] = surround;
    json curves = json::array();
    for (const ReflectivitySweep& sw : sweeps) {
      json c;
      c["n_periods"] = sw.n_periods;
      c["peak_period_nm"] = sw.peak_period_nm;
      c["peak_R"] = sw.peak_R;
      c["period_nm"] = sw.period_nm;
      c["R"] = sw.R;
      curves.push_back(std::move(c));
    }
    payload["curves"] = std::move(curves);
    deliver_envelope(config, "dbr", std::move(payload), out);
    return 0;
  }

  if (out.format == "csv") throw ConfigError("csv output needs a 'sweep' section");
  const double period = cfg::require_number(g, "grating", "period_nm");
  const double n_periods = cfg::require_number(g, "grating", "n_periods");
  const GratingStack stack = build_grating(period, duty, n_periods, n_lo, n_hi, surround);
  const StackResponse resp = transfer_matrix(stack, lambda);
  json payload;
  payload["lambda_nm"] = lambda;
  payload["period_nm"] = period;
  payload["n_periods"] = n_periods;
  payload["duty"] = duty;
  payload["n_lo"] = n_lo;
  payload["n_hi"] = n_hi;
  payload["surround"] = surround;
  payload["L_gr_um"] = nm_to_um(stack.length_nm());
  payload["R"] = resp.R;
  payload["T"] = resp.T;
  payload["r"] = {{"re", resp.r.real()}, {"im", resp.r.imag()}};
  payload["t"] = {{"re", resp.t.real()}, {"im", resp.t.imag()}};
  deliver_envelope(config, "dbr", std::move(payload), out);
  return 0;
}

int run_modevol(const json& config, const OutputSpec& out) {
  cfg::check_keys(config, "config",
                  {"command", "structure", "grid", "wavelength_nm", "solve", "cavity",
                   "dipole_Cm", "output"});
  if (out.format == "csv") throw ConfigError("modevol emits json only");
  const double lambda = parse_wavelength(config);
  const SlotArraySpec spec = parse_structure_section(config);
  const GridSpec grid = parse_grid_section(config);
  const SolveRequest req = parse_solve_section(config, lambda);

  const json& cav = cfg::require(config, "config", "cavity");
  cfg::check_keys(cav, "cavity", {"L_hat_um", "L_c_um", "L_eff_um", "L_gr_um", "R"});
  const double R = cfg::number_or(cav, "cavity", "R", 0.0);
  if (cfg::has(cav, "L_gr_um") && !cfg::has(cav, "R"))
    throw ConfigError("cavity.L_gr_um needs the mirror reflectivity cavity.R");
  json cavity_echo;
  if (cfg::has(cav, "R")) cavity_echo["R"] = R;
  const double L_hat = resolve_adjusted_length(cav, "cavity", R, cavity_echo);

  const IndexMap map = build_cross_section(spec, grid);
  const std::vector<ModeSolution> modes = solve_te_modes(map, req);
  if (modes.empty()) throw SolveError("no guided mode found for the mode-volume integral");
  const ModeVolume v = mode_volume(modes.front(), map, L_hat);

  json payload;
  payload["lambda_nm"] = lambda;
  payload["n_eff"] = modes.front().n_eff;
  payload["cavity"] = std::move(cavity_echo);
  payload["A_eff_um2"] = v.A_eff_um2;
  payload["V_um3"] = v.V_um3;
  payload["V_lambda3_over_n"] = v.V_lambda3_over_n;
  payload["n_at_max"] = v.n_at_max;
  if (cfg::has(config, "dipole_Cm")) {
    const double dipole = cfg::require_number(config, "config", "dipole_Cm");
    payload["rabi"] = {{"dipole_Cm", dipole},
                      {"Omega_rad_per_s", rabi_frequency(v.V_um3, dipole, lambda, v.n_at_max)}};
  }
  deliver_envelope(config, "modevol", std::move(payload), out);
  return 0;
}

json design_report_json(const DesignReport& rep) {
  json lateral;
  lateral["n_eff_single"] = rep.n_eff_single;
  json sampled = json::array();
  for (const RatePoint& p : rep.sampled)
    sampled.push_back({{"d_um", p.d_um}, {"J_rad_per_s", p.J}});
  lateral["sampled"] = std::move(sampled);
  lateral["fit"] = {{"J0_rad_per_s", rep.fit.J0},        {"d0_um", rep.fit.d0_um},
                    {"gamma_per_um", rep.fit.gamma_per_um}, {"r_squared", rep.fit.r_squared},
                    {"d_min_um", rep.fit.d_min_um},      {"d_max_um", rep.fit.d_max_um},
                    {"n_points", rep.fit.n_points},      {"decaying", rep.fit.decaying}};
  lateral["separation"] = {{"d_um", rep.separation.d_um},
                           {"extrapolated", rep.separation.extrapolated}};

  const double N_eff = 0.5 * (rep.n_lo + rep.n_hi);
  json longitudinal;
  longitudinal["n_lo"] = rep.n_lo;
  longitudinal["n_hi"] = rep.n_hi;
  longitudinal["period_nm"] = rep.period_nm;
  longitudinal["N_eff"] = N_eff;
  longitudinal["n_periods"] = rep.periods.n_periods;
  longitudinal["R"] = rep.periods.R;
  longitudinal["one_minus_R"] = 1.0 - rep.periods.R;
  longitudinal["L_eff_um"] = rep.periods.L_eff_um;
  longitudinal["L_hat_um"] = rep.periods.L_hat_um;
  longitudinal["tau_s"] = cavity_lifetime(rep.periods.L_hat_um, N_eff);
  longitudinal["J_E_rad_per_s"] = rep.periods.J_E;
  longitudinal["at_bound"] = rep.periods.at_bound;

  json cavity;
  cavity["A_eff_um2"] = rep.volume.A_eff_um2;
  cavity["V_um3"] = rep.volume.V_um3;
  cavity["V_lambda3_over_n"] = rep.volume.V_lambda3_over_n;
  cavity["n_at_max"] = rep.volume.n_at_max;
  cavity["Omega_rad_per_s"] = rep.rabi;

  json payload;
  payload["target_J_rad_per_s"] = rep.target_J;
  payload["lateral"] = std::move(lateral);
  payload["longitudinal"] = std::move(longitudinal);
  payload["cavity"] = std::move(cavity);
  payload["notes"] = rep.notes;
  return payload;
}

int run_design(const json& config, const OutputSpec& out) {
  cfg::check_keys(config, "config",
                  {"command", "structure", "grid", "wavelength_nm", "design", "output"});
  if (out.format == "csv") throw ConfigError("design emits json only");
  const double lambda = parse_wavelength(config);
  const SlotArraySpec spec = parse_structure_section(config);
  const GridSpec grid = parse_grid_section(config);

  const json& d = cfg::require(config, "config", "design");
  cfg::check_keys(d, "design",
                  {"target_J_rad_per_s", "separations_um", "period_nm", "duty", "L_c_um",
                   "dipole_Cm", "max_periods", "sweep_pad_x_nm"});
  DesignInputs in;
  in.lambda_nm = lambda;
  in.n_threads = thread_count();
  in.target_J = cfg::require_number(d, "design", "target_J_rad_per_s");
  if (cfg::has(d, "separations_um"))
    in.separations_um = cfg::parse_values(d.at("separations_um"), "design.separations_um");
  if (cfg::has(d, "period_nm"))
    in.period_nm = cfg::parse_values(d.at("period_nm"), "design.period_nm");
  in.duty = cfg::number_or(d, "design", "duty", in.duty);
  in.L_c_um = cfg::number_or(d, "design", "L_c_um", in.L_c_um);
  in.dipole_Cm = cfg::number_or(d, "design", "dipole_Cm", in.dipole_Cm);
  in.max_periods = cfg::number_or(d, "design", "max_periods", in.max_periods);
  in.sweep_pad_x = cfg::number_or(d, "design", "sweep_pad_x_nm", in.sweep_pad_x);

  const DesignReport rep = jch_report(spec, grid, in);
  deliver_envelope(config, "design", design_report_json(rep), out);
  return 0;
}

// Canned sweeps. Each writes its data table to <out_dir>/<preset>.csv and an
// envelope (inputs, summary numbers, table rows) to stdout.
std::filesystem::path preset_csv_path(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  return std::filesystem::path(out_dir) / (name + ".csv");
}

int reproduce_fig3(const std::string& out_dir) {
  const SlotArraySpec spec;  // diamond-air single guide, {20, 140, 110} nm
  const GridSpec grid;
  std::vector<double> seps;
  for (double d = 0.5; d <= 1.3 + 1e-9; d += 0.1) seps.push_back(d);

  double n_eff_single = 0.0;
  const std::vector<RatePoint> pts = lateral_rate_sweep(spec, grid, seps, 637.0, 1000.0,
                                                        thread_count(), &n_eff_single);
  const ExpFit fit = fit_exponential(pts);

  std::ostringstream ss;
  csv_begin(ss, "design", "d_um,J_L_rad_per_s", "d um, J_L rad/s");
  const std::string tag = csv_source_tag("design");
  json rows = json::array();
  for (const RatePoint& p : pts) {
    ss << csv_num(p.d_um) << "," << csv_num(p.J) << "," << tag << "\n";
    rows.push_back({{"d_um", p.d_um}, {"J_L_rad_per_s", p.J}});
  }
  const auto csv = preset_csv_path(out_dir, "fig3");
  write_text_file(csv.string(), ss.str());

  json config;
  config["command"] = "reproduce";
  config["preset"] = "fig3";
  config["wavelength_nm"] = 637.0;
  config["separations_um"] = seps;
  json payload;
  payload["csv"] = csv.string();
  payload["n_eff_single"] = n_eff_single;
  payload["rows"] = std::move(rows);
  payload["fit"] = {{"gamma_per_um", fit.gamma_per_um}, {"r_squared", fit.r_squared}};
  std::cout << make_envelope(config, "reproduce", std::move(payload)).dump(2) << "\n";
  return 0;
}

// Effective indices of the two grating cross-sections: the slot guide itself
// and the solid rod of equal outer width.
std::pair<double, double> grating_indices() {
  const SlotArraySpec slot;
  const GridSpec grid;
  SlotArraySpec solid = slot;
  solid.arrangement = Arrangement::solid_rod;
  solid.solid_width = 2.0 * slot.w_R + slot.w_s;
  const IndexMap slot_map = build_cross_section(slot, grid);
  const IndexMap solid_map = build_cross_section(solid, grid);
  return effective_section_indices(slot_map, solid_map, 637.0);
}

int reproduce_fig7a(const std::string& out_dir) {
  const auto [n_lo, n_hi] = grating_indices();
  std::vector<double> periods;
  for (double p = 200.0; p <= 240.0 + 1e-9; p += 2.0) periods.push_back(p);
  const std::vector<double> counts = {4.5, 9.5, 14.5, 19.5};
  const std::vector<ReflectivitySweep> sweeps =
      reflectivity_sweep(periods, counts, 0.5, n_lo, n_hi, n_lo, 637.0, thread_count());

  std::ostringstream ss;
  write_sweep_csv(ss, sweeps, "dbr");
  const auto csv = preset_csv_path(out_dir, "fig7a");
  write_text_file(csv.string(), ss.str());

  json config;
  config["command"] = "reproduce";
  config["preset"] = "fig7a";
  config["wavelength_nm"] = 637.0;
  config["period_nm"] = periods;
  config["n_periods"] = counts;
  json payload;
  payload["csv"] = csv.string();
  payload["n_lo"] = n_lo;
  payload["n_hi"] = n_hi;
  json peaks = json::array();
  for (const ReflectivitySweep& sw : sweeps)
    peaks.push_back({{"n_periods", sw.n_periods},
                     {"peak_period_nm", sw.peak_period_nm},
                     {"peak_R", sw.peak_R},
                     {"one_minus_peak_R", 1.0 - sw.peak_R}});
  payload["peaks"] = std::move(peaks);
  std::cout << make_envelope(config, "reproduce", std::move(payload)).dump(2) << "\n";
  return 0;
}

int reproduce_fig7b(const std::string& out_dir) {
  const auto [n_lo, n_hi] = grating_indices();
  const double period = 220.0;
  const double N_eff = 0.5 * (n_lo + n_hi);

  std::ostringstream ss;
  csv_begin(ss, "design", "n_periods,R,L_eff_um,L_hat_um,J_E_rad_per_s",
            "lengths um, rates rad/s");
  const std::string tag = csv_source_tag("design");
  json rows = json::array();
  for (double np = 4.5; np <= 39.5 + 1e-9; np += 5.0) {
    const GratingStack stack = build_grating(period, 0.5, np, n_lo, n_hi, n_lo);
    const StackResponse resp = transfer_matrix(stack, 637.0);
    const double L_eff = effective_length(nm_to_um(stack.length_nm()), resp.R);
    const double L_hat = adjusted_length(0.0, L_eff);
    const double J_E = end_to_end_rate(resp.R, L_hat, N_eff);
    ss << csv_num(np) << "," << csv_num(resp.R) << "," << csv_num(L_eff) << ","
       << csv_num(L_hat) << "," << csv_num(J_E) << "," << tag << "\n";
    rows.push_back({{"n_periods", np},
                    {"R", resp.R},
                    {"L_eff_um", L_eff},
                    {"L_hat_um", L_hat},
                    {"J_E_rad_per_s", J_E}});
  }
  const auto csv = preset_csv_path(out_dir, "fig7b");
  write_text_file(csv.string(), ss.str());

  json config;
  config["command"] = "reproduce";
  config["preset"] = "fig7b";
  config["wavelength_nm"] = 637.0;
  config["period_nm"] = period;
  json payload;
  payload["csv"] = csv.string();
  payload["n_lo"] = n_lo;
  payload["n_hi"] = n_hi;
  payload["N_eff"] = N_eff;
  payload["rows"] = std::move(rows);
  std::cout << make_envelope(config, "reproduce", std::move(payload)).dump(2) << "\n";
  return 0;
}

std::string error_record(const std::string& type, const std::string& message) {
  json e;
  e["error"] = {{"type", type}, {"message", message}};
  return e.dump(2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slot-waveguide cavity arrays: mode solving, coupling rates, mirror design"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  std::string config_path, output_path, format_flag;
  auto add_module = [&](const char* name, const char* desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--output", output_path, "output file (default: config output.path, else stdout)");
    sub->add_option("--format", format_flag, "json or csv (overrides config output.format)");
    return sub;
  };
  add_module("modes", "guided quasi-TE modes of a slot-guide cross-section");
  add_module("couple", "coupling strengths and mirror parameters to hopping rates");
  add_module("nacmt", "supermodes to coupling matrix, with tight-binding grading");
  add_module("dbr", "transfer-matrix reflectivity of slot/solid Bragg gratings");
  add_module("modevol", "cavity mode volume and single-photon Rabi frequency");
  add_module("design", "invert rate targets into separations and period counts");

  CLI::App* repro = app.add_subcommand("reproduce", "run a canned sweep preset and emit its table");
  std::string preset, out_dir = ".";
  repro->add_option("preset", preset, "fig3 | fig7a | fig7b")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig7a", "fig7b"}));
  repro->add_option("--out-dir", out_dir, "directory for the CSV table (default: .)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (repro->parsed()) {
      if (preset == "fig3") return reproduce_fig3(out_dir);
      if (preset == "fig7a") return reproduce_fig7a(out_dir);
      return reproduce_fig7b(out_dir);
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    const cfg::Loaded loaded = cfg::load_config_file(config_path);
    if (loaded.command != cmd)
      throw ConfigError("config command '" + loaded.command + "' does not match subcommand '" +
                        cmd + "'");
    const OutputSpec out = parse_output(loaded.config, output_path, format_flag);
    if (cmd == "modes") return run_modes(loaded.config, out);
    if (cmd == "couple") return run_couple(loaded.config, out);
    if (cmd == "nacmt") return run_nacmt(loaded.config, out);
    if (cmd == "dbr") return run_dbr(loaded.config, out);
    if (cmd == "modevol") return run_modevol(loaded.config, out);
    return run_design(loaded.config, out);
  } catch (const ConfigError& e) {
    std::cout << error_record("config", e.what()) << "\n";
    return 2;
  } catch (const SolveError& e) {
    std::cout << error_record("solve", e.what()) << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cout << error_record("internal", e.what()) << "\n";
    return 1;
  }
}
