#include "slotkit/design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace slotkit {

ExpFit fit_exponential(std::vector<RatePoint> points) {
  if (points.size() < 2) throw ConfigError("exponential fit needs at least two points");
  for (const auto& p : points)
    if (p.J <= 0.0) throw ConfigError("exponential fit needs positive rates");
  std::sort(points.begin(), points.end(),
            [](const RatePoint& a, const RatePoint& b) { return a.d_um < b.d_um; });

  const double d0 = points.front().d_um;
  const auto n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double x = p.d_um - d0, y = std::log(p.J);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double var = sxx - sx * sx / n;
  if (var <= 0.0) throw ConfigError("exponential fit needs at least two distinct separations");
  const double slope = (sxy - sx * sy / n) / var;
  const double intercept = (sy - slope * sx) / n;

  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& p : points) {
    const double x = p.d_um - d0, y = std::log(p.J);
    const double e = y - (intercept + slope * x);
    ss_res += e * e;
    const double dy = y - sy / n;
    ss_tot += dy * dy;
  }

  ExpFit fit;
  fit.J0 = std::exp(intercept);
  fit.d0_um = d0;
  fit.gamma_per_um = -slope;
  fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  fit.d_min_um = points.front().d_um;
  fit.d_max_um = points.back().d_um;
  fit.n_points = static_cast<int>(points.size());
  fit.decaying = fit.gamma_per_um > 0.0;
  return fit;
}

SeparationSolution solve_separation(const ExpFit& fit, double target_J) {
  if (target_J <= 0.0) throw ConfigError("target rate must be positive");
  if (!fit.decaying) throw ConfigError("rate curve is not decaying; separation has no solution");
  SeparationSolution sol;
  sol.d_um = fit.d0_um + std::log(fit.J0 / target_J) / fit.gamma_per_um;
  sol.extrapolated = sol.d_um < fit.d_min_um - 1e-12 || sol.d_um > fit.d_max_um + 1e-12;
  return sol;
}

PeriodSolution solve_periods(double target_J_E, double period_nm, double duty, double n_lo,
                             double n_hi, double L_c_um, double lambda_nm,
                             double max_periods) {
  if (target_J_E <= 0.0) throw ConfigError("target rate must be positive");
  if (max_periods < 0.5) throw ConfigError("max_periods must allow at least half a period");
  const double N_eff = 0.5 * (n_lo + n_hi);

  PeriodSolution sol;
  bool first = true;
  for (double np = 0.5; np <= max_periods + 0.25; np += 0.5) {
    // The grating is embedded in the slot waveguide on both sides.
    const GratingStack g = build_grating(period_nm, duty, np, n_lo, n_hi, n_lo);
    sol.n_periods = np;
    sol.R = transfer_matrix(g, lambda_nm).R;
    sol.L_eff_um = effective_length(nm_to_um(g.length_nm()), sol.R);
    sol.L_hat_um = adjusted_length(L_c_um, sol.L_eff_um);
    sol.J_E = end_to_end_rate(sol.R, sol.L_hat_um, N_eff);
    if (first && sol.J_E < target_J_E) {
      std::ostringstream msg;
      msg << "target exceeds the maximum achievable end-to-end rate " << sol.J_E
          << " rad/s at 0.5 periods";
      throw ConfigError(msg.str());
    }
    first = false;
    if (sol.J_E <= target_J_E) return sol;
  }
  sol.at_bound = true;
  return sol;
}

std::vector<RatePoint> lateral_rate_sweep(const SlotArraySpec& guide, const GridSpec& grid,
                                          const std::vector<double>& separations_um,
                                          double lambda_nm, double sweep_pad_x,
                                          int n_threads, double* n_eff_single) {
  if (guide.arrangement != Arrangement::single)
    throw ConfigError("lateral sweep needs a single-guide template");
  guide.validate();
  if (separations_um.empty()) throw ConfigError("no separations to sweep");

  SolveRequest single_req;
  single_req.num_modes = 1;
  single_req.lambda_nm = lambda_nm;
  const IndexMap single_map = build_cross_section(guide, grid);
  const auto single_modes = solve_te_modes(single_map, single_req);
  if (single_modes.empty()) throw SolveError("isolated guide supports no guided mode");
  const double n_iso = single_modes.front().n_eff;
  if (n_eff_single) *n_eff_single = n_iso;
  const double beta_iso = single_modes.front().beta;

  const double unit_nm = 2.0 * guide.w_R + guide.w_s;
  std::vector<RatePoint> points(separations_um.size());
  auto solve_point = [&](std::size_t idx) {
    const double d_um = separations_um[idx];
    const double w_G = um_to_nm(d_um) - unit_nm;
    if (w_G <= 0.0) {
      std::ostringstream msg;
      msg << "separation " << d_um << " um leaves no cladding gap between the guides";
      throw ConfigError(msg.str());
    }
    SlotArraySpec pair = guide;
    pair.arrangement = Arrangement::cladding_separated;
    pair.n_guides = 2;
    pair.w_G = w_G;
    GridSpec pair_grid = grid;
    pair_grid.pad_x = std::max(grid.pad_x, sweep_pad_x);
    SolveRequest req;
    req.num_modes = 2;
    req.lambda_nm = lambda_nm;
    const IndexMap map = build_cross_section(pair, pair_grid);
    const SupermodeSet set = collect_supermodes(map, req);
    const CouplingMatrix cm = nacmt_from_modes(set, beta_iso);
    points[idx] = {d_um, lateral_rate(std::abs(cm.M(0, 1)), n_iso, lambda_nm)};
  };

  const int nt = std::max(1, std::min<int>(n_threads, static_cast<int>(points.size())));
  if (nt == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) solve_point(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nt);
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < points.size(); i += nt) solve_point(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
  }
  std::sort(points.begin(), points.end(),
            [](const RatePoint& a, const RatePoint& b) { return a.d_um < b.d_um; });
  return points;
}

DesignReport jch_report(const SlotArraySpec& guide, const GridSpec& grid,
                        const DesignInputs& in) {
  if (in.target_J <= 0.0) throw ConfigError("target rate must be positive");
  if (guide.arrangement != Arrangement::single)
    throw ConfigError("design needs a single-guide template");

  DesignInputs opts = in;
  if (opts.separations_um.empty())
    for (int i = 0; i <= 8; ++i) opts.separations_um.push_back(0.5 + 0.1 * i);
  if (opts.period_nm.empty())
    for (double p = 200.0; p <= 240.0 + 1e-9; p += 2.0) opts.period_nm.push_back(p);

  DesignReport rep;
  rep.target_J = opts.target_J;

  // Lateral side: sweep, fit, invert.
  rep.sampled = lateral_rate_sweep(guide, grid, opts.separations_um, opts.lambda_nm,
                                   opts.sweep_pad_x, opts.n_threads, &rep.n_eff_single);
  rep.fit = fit_exponential(rep.sampled);
  rep.separation = solve_separation(rep.fit, opts.target_J);
  if (rep.separation.extrapolated)
    rep.notes.push_back("separation lies outside the swept range (extrapolated fit)");

  // Longitudinal side: section indices, Bragg period, period count.
  const IndexMap slot_map = build_cross_section(guide, grid);
  SlotArraySpec solid = guide;
  solid.arrangement = Arrangement::solid_rod;
  solid.solid_width = 2.0 * guide.w_R + guide.w_s;
  const IndexMap solid_map = build_cross_section(solid, grid);
  std::tie(rep.n_lo, rep.n_hi) =
      effective_section_indices(slot_map, solid_map, opts.lambda_nm);

  const auto sweeps = reflectivity_sweep(opts.period_nm, {14.5}, opts.duty, rep.n_lo,
                                         rep.n_hi, rep.n_lo, opts.lambda_nm, 1);
  rep.period_nm = sweeps.front().peak_period_nm;
  rep.periods = solve_periods(opts.target_J, rep.period_nm, opts.duty, rep.n_lo, rep.n_hi,
                              opts.L_c_um, opts.lambda_nm, opts.max_periods);
  if (rep.periods.at_bound)
    rep.notes.push_back("period count stopped at the sweep bound before reaching the target");

  // Cavity figures at the designed mirror.
  SolveRequest req;
  req.num_modes = 1;
  req.lambda_nm = opts.lambda_nm;
  const auto modes = solve_te_modes(slot_map, req);
  if (modes.empty()) throw SolveError("slot guide supports no guided mode");
  rep.volume = mode_volume(modes.front(), slot_map, rep.periods.L_hat_um);
  rep.rabi = rabi_frequency(rep.volume.V_um3, opts.dipole_Cm, opts.lambda_nm,
                            rep.volume.n_at_max);
  return rep;
}

}  // namespace slotkit
