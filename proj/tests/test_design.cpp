#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "slotkit/design.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace slotkit;
using doctest::Approx;

namespace {

std::vector<RatePoint> synthetic_decay(double J0, double d0, double gamma,
                                       const std::vector<double>& seps) {
  std::vector<RatePoint> pts;
  for (double d : seps) pts.push_back({d, J0 * std::exp(-gamma * (d - d0))});
  return pts;
}

}  // namespace

TEST_CASE("exponential fit recovers an exact decay") {
  // Points handed over out of order; the fit sorts internally.
  auto pts = synthetic_decay(5e13, 0.5, 14.0, {0.9, 0.5, 1.3, 0.7, 1.1, 0.6, 1.2, 0.8, 1.0});
  const ExpFit fit = fit_exponential(pts);
  CHECK(fit.gamma_per_um == Approx(14.0).epsilon(1e-9));
  CHECK(fit.J0 == Approx(5e13).epsilon(1e-9));
  CHECK(fit.d0_um == 0.5);
  CHECK(fit.r_squared >= 1.0 - 1e-12);
  CHECK(fit.d_min_um == 0.5);
  CHECK(fit.d_max_um == 1.3);
  CHECK(fit.n_points == 9);
  CHECK(fit.decaying);

  // Inverting at a sampled rate returns the sampled separation.
  const double J_at = 5e13 * std::exp(-14.0 * (0.9 - 0.5));
  const SeparationSolution sol = solve_separation(fit, J_at);
  CHECK(sol.d_um == Approx(0.9).epsilon(1e-12));
  CHECK_FALSE(sol.extrapolated);

  // A rate below the weakest sampled point lands outside the range.
  const SeparationSolution out = solve_separation(fit, 1e6);
  CHECK(out.d_um > 1.3);
  CHECK(out.extrapolated);
}

TEST_CASE("two-point fit through the reference rates") {
  // 3.1e13 rad/s at 0.5 um and 2.4e10 rad/s at 1.0 um pin the decay constant.
  const ExpFit fit = fit_exponential({{0.5, 3.1e13}, {1.0, 2.4e10}});
  CHECK(fit.gamma_per_um == Approx(14.327377306238676).epsilon(1e-12));
  CHECK(fit.r_squared == 1.0);  // two points, exact line

  const SeparationSolution ghz = solve_separation(fit, 1e9);
  CHECK(ghz.d_um == Approx(1.2218168589002052).epsilon(1e-12));
  CHECK(ghz.extrapolated);  // past the 1.0 um sample, flagged not hidden

  const SeparationSolution edge = solve_separation(fit, 2.4e10);
  CHECK(edge.d_um == Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(edge.extrapolated);
}

TEST_CASE("non-decaying curves refuse to invert") {
  const ExpFit flat = fit_exponential({{0.5, 1e10}, {1.0, 1e10}, {1.5, 1e10}});
  CHECK_FALSE(flat.decaying);
  CHECK_THROWS_AS(solve_separation(flat, 1e9), ConfigError);

  const ExpFit rising = fit_exponential(synthetic_decay(1e10, 0.5, -3.0, {0.5, 0.7, 0.9}));
  CHECK_FALSE(rising.decaying);
  CHECK_THROWS_AS(solve_separation(rising, 1e9), ConfigError);
}

TEST_CASE("fit input validation") {
  CHECK_THROWS_AS(fit_exponential({{0.5, 1e10}}), ConfigError);
  CHECK_THROWS_AS(fit_exponential({{0.5, 1e10}, {1.0, 0.0}}), ConfigError);
  CHECK_THROWS_AS(fit_exponential({{0.5, 1e10}, {1.0, -2e9}}), ConfigError);
  CHECK_THROWS_WITH_AS(fit_exponential({{0.7, 1e10}, {0.7, 2e10}}),
                       doctest::Contains("distinct separations"), ConfigError);
  CHECK_THROWS_AS(solve_separation(fit_exponential({{0.5, 3.1e13}, {1.0, 2.4e10}}), 0.0),
                  ConfigError);
}

TEST_CASE("period counts for target end-to-end rates") {
  // 220 nm gratings at indices 1.31 / 1.60, no extra cavity length.
  const PeriodSolution ghz = solve_periods(1e9, 220.0, 0.5, 1.31, 1.6, 0.0, 637.0);
  CHECK(ghz.n_periods == 37.5);
  CHECK(ghz.J_E <= 1e9);
  CHECK_FALSE(ghz.at_bound);

  const PeriodSolution fast = solve_periods(1e11, 220.0, 0.5, 1.31, 1.6, 0.0, 637.0);
  CHECK(fast.n_periods == 25.5);
  CHECK(fast.J_E <= 1e11);

  // More periods for a slower target, never fewer.
  CHECK(ghz.n_periods > fast.n_periods);
}

TEST_CASE("period solution is self-consistent with the rate chain") {
  // Rebuild J_E(14.5 periods) by hand, then ask for exactly that rate.
  const GratingStack g = build_grating(220.0, 0.5, 14.5, 1.31, 1.6, 1.31);
  const double R = transfer_matrix(g, 637.0).R;
  const double L_eff = effective_length(nm_to_um(g.length_nm()), R);
  const double J = end_to_end_rate(R, adjusted_length(0.0, L_eff), 0.5 * (1.31 + 1.6));

  const PeriodSolution sol = solve_periods(J, 220.0, 0.5, 1.31, 1.6, 0.0, 637.0);
  CHECK(sol.n_periods == 14.5);
  CHECK(sol.R == Approx(R).epsilon(1e-15));
  CHECK(sol.J_E == Approx(J).epsilon(1e-15));
  CHECK(sol.L_hat_um == Approx(2.0 * L_eff).epsilon(1e-15));
}

TEST_CASE("period search bounds") {
  // Cap too low for the target: flagged, not silently satisfied.
  const PeriodSolution capped = solve_periods(1e3, 220.0, 0.5, 1.31, 1.6, 0.0, 637.0, 5.0);
  CHECK(capped.at_bound);
  CHECK(capped.n_periods == 5.0);
  CHECK(capped.J_E > 1e3);

  // Target above what a half-period mirror leaks: no grating can be that open.
  CHECK_THROWS_WITH_AS(solve_periods(1e30, 220.0, 0.5, 1.31, 1.6, 0.0, 637.0),
                       doctest::Contains("0.5 periods"), ConfigError);
  CHECK_THROWS_AS(solve_periods(1e9, 220.0, 0.5, 1.31, 1.6, 0.0, 637.0, 0.4), ConfigError);
  CHECK_THROWS_AS(solve_periods(-1e9, 220.0, 0.5, 1.31, 1.6, 0.0, 637.0), ConfigError);
}

TEST_CASE("extra cavity length slows the end-to-end rate") {
  const PeriodSolution tight = solve_periods(1e9, 220.0, 0.5, 1.31, 1.6, 0.0, 637.0);
  const PeriodSolution roomy = solve_periods(1e9, 220.0, 0.5, 1.31, 1.6, 5.0, 637.0);
  // A longer cavity dilutes the mirror leak, so fewer periods reach the target.
  CHECK(roomy.n_periods <= tight.n_periods);
  CHECK(roomy.L_hat_um > tight.L_hat_um);
  CHECK(roomy.J_E <= 1e9);
}

TEST_CASE("sweep input validation") {
  SlotArraySpec guide;  // defaults: single diamond guide
  GridSpec grid;
  CHECK_THROWS_WITH_AS(lateral_rate_sweep(guide, grid, {}, 637.0, 1000.0, 1),
                       doctest::Contains("no separations"), ConfigError);
  SlotArraySpec pair = guide;
  pair.arrangement = Arrangement::cladding_separated;
  pair.n_guides = 2;
  CHECK_THROWS_WITH_AS(lateral_rate_sweep(pair, grid, {0.5}, 637.0, 1000.0, 1),
                       doctest::Contains("single-guide"), ConfigError);
  // Separation smaller than the structure itself leaves no cladding between.
  CHECK_THROWS_WITH_AS(lateral_rate_sweep(guide, grid, {0.2}, 637.0, 1000.0, 1),
                       doctest::Contains("no cladding gap"), ConfigError);

  DesignInputs in;
  in.target_J = -5.0;
  CHECK_THROWS_AS(jch_report(guide, grid, in), ConfigError);
}
