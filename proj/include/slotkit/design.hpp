#pragma once

#include "slotkit/cmt.hpp"
#include "slotkit/coupling.hpp"
#include "slotkit/dbr.hpp"

namespace slotkit {

struct RatePoint {
  double d_um = 0.0;  // centre-to-centre separation
  double J = 0.0;     // rad/s
};

// Least-squares fit of ln J against d: J(d) = J0 exp(-gamma (d - d0)),
// d0 the smallest fitted separation.
struct ExpFit {
  double J0 = 0.0;
  double d0_um = 0.0;
  double gamma_per_um = 0.0;
  double r_squared = 0.0;
  double d_min_um = 0.0, d_max_um = 0.0;  // fitted range
  int n_points = 0;
  bool decaying = false;  // gamma > 0
};

ExpFit fit_exponential(std::vector<RatePoint> points);

struct SeparationSolution {
  double d_um = 0.0;
  bool extrapolated = false;  // outside the fitted range
};

// Invert the fit: d = d0 + ln(J0/target)/gamma. Throws ConfigError for a
// non-decaying fit or non-positive target; extrapolation is flagged, never
// silent.
SeparationSolution solve_separation(const ExpFit& fit, double target_J);

struct PeriodSolution {
  double n_periods = 0.0;
  double R = 0.0;
  double L_eff_um = 0.0;
  double L_hat_um = 0.0;
  double J_E = 0.0;
  bool at_bound = false;  // target not reached by max_periods
};

// Smallest period count (0.5 steps) whose grating gives an end-to-end rate at
// or below target. The grating mode index for the round trip is (n_lo+n_hi)/2.
PeriodSolution solve_periods(double target_J_E, double period_nm, double duty, double n_lo,
                             double n_hi, double L_c_um, double lambda_nm,
                             double max_periods = 60.0);

struct DesignReport {
  double target_J = 0.0;
  // lateral side
  ExpFit fit;
  SeparationSolution separation;
  std::vector<RatePoint> sampled;   // solver-computed J(d)
  double n_eff_single = 0.0;        // isolated guide
  // longitudinal side
  double n_lo = 0.0, n_hi = 0.0;
  double period_nm = 0.0;
  PeriodSolution periods;
  // cavity figures
  ModeVolume volume;
  double rabi = 0.0;   // rad/s
  std::vector<std::string> notes;
};

struct DesignInputs {
  double target_J = 1e9;               // rad/s, shared by both coupling routes
  double lambda_nm = 637.0;
  std::vector<double> separations_um;  // lateral sweep; default 0.5..1.3 step 0.1
  std::vector<double> period_nm;       // DBR period sweep; default 200..240 step 2
  double duty = 0.5;
  double L_c_um = 0.0;                 // extra cavity length between the mirrors
  double dipole_Cm = 1e-30;
  double max_periods = 60.0;
  double sweep_pad_x = 1000.0;         // nm; wide walls keep tiny splittings clean
  int n_threads = 1;                   // sweep points solved in parallel, by-index writes
};

// J(d) for pairs of `guide` at each centre-to-centre separation: two-guide
// supermode splitting -> coupling matrix off-diagonal -> rate. The isolated
// guide is solved once for n_eff (stored through *n_eff_single if given).
std::vector<RatePoint> lateral_rate_sweep(const SlotArraySpec& guide, const GridSpec& grid,
                                          const std::vector<double>& separations_um,
                                          double lambda_nm, double sweep_pad_x,
                                          int n_threads, double* n_eff_single = nullptr);

// Full chain: lateral sweep -> fit -> separation; section indices -> grating
// period -> period count; mode volume and Rabi frequency at the result.
DesignReport jch_report(const SlotArraySpec& guide, const GridSpec& grid,
                        const DesignInputs& in);

}  // namespace slotkit
