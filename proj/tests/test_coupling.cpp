#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "slotkit/coupling.hpp"

#include <doctest.h>

#include <cmath>

using namespace slotkit;

namespace {

// A flat unit field on a uniform map: every closed-form volume quantity is
// elementary there.
struct Flat {
  IndexMap map;
  ModeSolution mode;
};

Flat flat_profile(int nx, int ny, double d_nm, double n_index) {
  Flat f;
  f.map.nx = nx;
  f.map.ny = ny;
  f.map.dx = f.map.dy = d_nm;
  f.map.origin_x = -0.5 * nx * d_nm;
  f.map.origin_y = -0.5 * ny * d_nm;
  f.map.eps = ArrayXXd::Constant(nx, ny, n_index * n_index);
  f.map.n_cl = f.map.n_max = n_index;
  f.mode.n_eff = n_index;
  f.mode.beta = n_index * vacuum_wavenumber(637.0);
  f.mode.lambda_nm = 637.0;
  f.mode.guided = true;
  f.mode.grid = {nx, ny, d_nm, d_nm, f.map.origin_x, f.map.origin_y};
  f.mode.field = ArrayXXd::Constant(nx, ny, 1.0);
  return f;
}

}  // namespace

TEST_CASE("lateral rate frozen value and unit consistency") {
  // kappa = 2.6442 rad^2/um^2 at n_eff = 1.31 feeds straight into the rate.
  CHECK(lateral_rate(2.6442, 1.31, 637.0) == doctest::Approx(30674202229864.9).epsilon(1e-12));
  // Explicit re-derivation with the wavenumber spelled out.
  const double k = 2.0 * M_PI / 0.637;
  const double by_hand = phys::c_um_per_s * 2.6442 / (2.0 * 1.31 * k);
  CHECK(lateral_rate(2.6442, 1.31, 637.0) == doctest::Approx(by_hand).epsilon(1e-12));
  CHECK(lateral_rate(0.0, 1.31, 637.0) == 0.0);
  CHECK_THROWS_AS(lateral_rate(-1.0, 1.31, 637.0), ConfigError);
  CHECK_THROWS_AS(lateral_rate(2.6, 0.5, 637.0), ConfigError);
}

TEST_CASE("effective length: frozen values, limits and monotonicity") {
  CHECK(effective_length(3.19, 0.99) == doctest::Approx(0.5301994017047039).epsilon(1e-12));
  CHECK(effective_length(4.29, 0.999) == doctest::Approx(0.5170107790447042).epsilon(1e-12));
  // exact limits
  CHECK(effective_length(3.19, 0.0) == 3.19 / 2.0);
  CHECK(effective_length(3.19, 1.0) == 0.0);
  // monotone decreasing in R, bounded by L/2
  double prev = effective_length(2.0, 0.0);
  for (double R = 0.1; R < 1.0; R += 0.1) {
    const double cur = effective_length(2.0, R);
    CHECK(cur < prev);
    CHECK(cur > 0.0);
    CHECK(cur <= 1.0);
    prev = cur;
  }
  CHECK_THROWS_AS(effective_length(2.0, 1.5), ConfigError);
  CHECK_THROWS_AS(effective_length(-1.0, 0.5), ConfigError);
}

TEST_CASE("adjusted length and lifetime") {
  CHECK(adjusted_length(0.3185, 0.0) == doctest::Approx(0.3185));
  CHECK(adjusted_length(0.0, 0.56) == doctest::Approx(1.12));
  CHECK_THROWS_AS(adjusted_length(-0.1, 0.5), ConfigError);
  CHECK(cavity_lifetime(1.12, 1.45) == doctest::Approx(5.4170809060179894e-15).epsilon(1e-12));
}

TEST_CASE("end-to-end rate frozen value and limits") {
  CHECK(end_to_end_rate(0.99, 1.12, 1.45) == doctest::Approx(5813991348737.379).epsilon(1e-12));
  CHECK(end_to_end_rate(1.0, 1.12, 1.45) == 0.0);  // perfect mirror, no hopping
  // increasing in transmission at fixed geometry
  CHECK(end_to_end_rate(0.95, 1.12, 1.45) > end_to_end_rate(0.99, 1.12, 1.45));
  // scales inversely with the adjusted length at fixed R
  const double a = end_to_end_rate(0.99, 1.12, 1.45);
  const double b = end_to_end_rate(0.99, 2.24, 1.45);
  CHECK(a == doctest::Approx(2.0 * b).epsilon(1e-12));
  CHECK_THROWS_AS(end_to_end_rate(0.99, 0.0, 1.45), ConfigError);
  CHECK_THROWS_AS(end_to_end_rate(1.2, 1.12, 1.45), ConfigError);
}

TEST_CASE("flat-profile mode volume is area times half the length") {
  Flat f = flat_profile(20, 10, 100.0, 1.0);  // 2 um x 1 um of air
  const double L_hat = 0.8;
  const ModeVolume v = mode_volume(f.mode, f.map, L_hat);
  CHECK(v.A_eff_um2 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(v.V_um3 == doctest::Approx(2.0 * 0.5 * L_hat).epsilon(1e-12));
  CHECK(v.n_at_max == doctest::Approx(1.0));
  const double unit = 0.637 * 0.637 * 0.637 / 1.0;
  CHECK(v.V_lambda3_over_n == doctest::Approx(v.V_um3 / unit).epsilon(1e-12));
}

TEST_CASE("mode volume is invariant under field rescaling") {
  Flat f = flat_profile(12, 12, 50.0, 2.4);
  const ModeVolume base = mode_volume(f.mode, f.map, 0.5);
  f.mode.field *= -37.25;
  const ModeVolume scaled = mode_volume(f.mode, f.map, 0.5);
  CHECK(scaled.V_um3 == doctest::Approx(base.V_um3).epsilon(1e-12));
  CHECK(scaled.A_eff_um2 == doctest::Approx(base.A_eff_um2).epsilon(1e-12));

  f.mode.field.setZero();
  CHECK_THROWS_AS(mode_volume(f.mode, f.map, 0.5), ConfigError);
  f.mode.field.setConstant(1.0);
  CHECK_THROWS_AS(mode_volume(f.mode, f.map, 0.0), ConfigError);
}

TEST_CASE("vacuum Rabi frequency: frozen value and scaling") {
  // V = 0.02 lambda^3 / n for n = 2.4 in cubic microns.
  const double V = 0.0021539571083333334;
  CHECK(rabi_frequency(V, 1e-30, 637.0, 1.0) == doctest::Approx(54226877366.91907).epsilon(1e-9));
  CHECK(rabi_frequency(V, 0.0, 637.0, 1.0) == 0.0);
  // quadrupling the volume halves the frequency
  const double one = rabi_frequency(V, 1e-30, 637.0, 1.0);
  const double four = rabi_frequency(4.0 * V, 1e-30, 637.0, 1.0);
  CHECK(one == doctest::Approx(2.0 * four).epsilon(1e-12));
  // denominator index enters linearly
  const double hi_n = rabi_frequency(V, 1e-30, 637.0, 2.0);
  CHECK(one == doctest::Approx(2.0 * hi_n).epsilon(1e-12));
  CHECK_THROWS_AS(rabi_frequency(0.0, 1e-30, 637.0, 1.0), ConfigError);
  CHECK_THROWS_AS(rabi_frequency(V, -1e-30, 637.0, 1.0), ConfigError);
}
