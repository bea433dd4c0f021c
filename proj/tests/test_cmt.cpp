#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "slotkit/cmt.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

using namespace slotkit;

namespace {

struct PairFixture {
  SlotArraySpec spec;
  GridSpec grid;
  IndexMap map;
  SupermodeSet set;
  CouplingMatrix cm;
  ModeSolution iso0, iso1;
  double beta_iso = 0.0;
};

// One shared solve of the 500 nm centre-to-centre guide pair.
const PairFixture& pair_fixture() {
  static const PairFixture fx = [] {
    PairFixture f;
    f.spec.arrangement = Arrangement::cladding_separated;
    f.spec.n_guides = 2;
    f.map = build_cross_section(f.spec, f.grid);
    SolveRequest req;
    req.num_modes = 2;
    f.set = collect_supermodes(f.map, req);
    SolveRequest one_req;
    f.iso0 = solve_te_modes(build_single_guide(f.spec, f.grid, 0), one_req).at(0);
    f.iso1 = solve_te_modes(build_single_guide(f.spec, f.grid, 1), one_req).at(0);
    f.beta_iso = f.iso0.beta;
    f.cm = nacmt_from_modes(f.set, f.beta_iso);
    return f;
  }();
  return fx;
}

MatrixXd literal5(const double (&rows)[5][5]) {
  MatrixXd m(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace

TEST_CASE("guide pair splits into an even/odd supermode doublet") {
  const auto& f = pair_fixture();
  REQUIRE(f.set.modes.size() == 2);
  CHECK(f.set.modes[0].n_eff > f.set.modes[1].n_eff);
  CHECK(f.set.modes[0].guided);
  CHECK(f.set.modes[1].guided);
  // Even mode: equal sign at both slots; odd mode: opposite signs.
  const auto& c = f.set.slot_centers;
  REQUIRE(c.size() == 2);
  CHECK(f.set.modes[0].field_at(c[0], 0.0) * f.set.modes[0].field_at(c[1], 0.0) > 0.0);
  CHECK(f.set.modes[1].field_at(c[0], 0.0) * f.set.modes[1].field_at(c[1], 0.0) < 0.0);
  // The splitting brackets the isolated guide constant.
  CHECK(f.set.modes[0].n_eff > f.iso0.n_eff);
  CHECK(f.set.modes[1].n_eff < f.iso0.n_eff);
}

TEST_CASE("two-guide inversion reduces to the half-splitting closed form") {
  const auto& f = pair_fixture();
  const double chi_p = f.set.modes[0].beta, chi_m = f.set.modes[1].beta;
  const double closed = 0.5 * (chi_p * chi_p - chi_m * chi_m);
  CHECK(f.cm.M(0, 1) == doctest::Approx(closed).epsilon(1e-9));
  CHECK(f.cm.M(1, 0) == doctest::Approx(closed).epsilon(1e-6));
  CHECK(f.cm.M(0, 0) == doctest::Approx(f.cm.M(1, 1)).epsilon(1e-6));
}

TEST_CASE("inversion reconstructs the supermode eigenproblem") {
  const auto& f = pair_fixture();
  const AmplitudeMatrix amp = extract_amplitudes(f.set);
  MatrixXd X = MatrixXd::Zero(2, 2);
  for (int j = 0; j < 2; ++j) X(j, j) = f.set.modes[j].beta * f.set.modes[j].beta;
  const MatrixXd rhs = amp.A * X;
  const double residual = (f.cm.M * amp.A - rhs).norm() / rhs.norm();
  CHECK(residual < 1e-12);
}

TEST_CASE("inversion is invariant under supermode rescaling") {
  const auto& f = pair_fixture();
  AmplitudeMatrix amp = extract_amplitudes(f.set);
  std::vector<double> chi = {f.set.modes[0].beta, f.set.modes[1].beta};
  const CouplingMatrix base = nacmt(amp, chi, f.beta_iso);
  AmplitudeMatrix scaled = amp;
  scaled.A.col(0) *= 3.7;
  scaled.A.col(1) *= -0.21;
  const CouplingMatrix again = nacmt(scaled, chi, f.beta_iso);
  CHECK((again.M - base.M).norm() / base.M.norm() < 1e-12);
}

TEST_CASE("coupling matrix spectrum equals the squared supermode constants") {
  const auto& f = pair_fixture();
  Eigen::EigenSolver<MatrixXd> es(f.cm.M);
  std::vector<double> ev;
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(es.eigenvalues()[i].imag()) < 1e-9 * std::abs(es.eigenvalues()[i]));
    ev.push_back(es.eigenvalues()[i].real());
  }
  std::sort(ev.begin(), ev.end(), std::greater<>());
  for (int i = 0; i < 2; ++i) {
    const double chi2 = f.set.modes[i].beta * f.set.modes[i].beta;
    CHECK(ev[i] == doctest::Approx(chi2).epsilon(1e-9));
  }
}

TEST_CASE("direct perturbation overlap agrees with the inverted off-diagonal") {
  const auto& f = pair_fixture();
  const IndexMap one1 = build_single_guide(f.spec, f.grid, 1);
  const double kappa = direct_kappa(f.map, one1, f.iso0, f.iso1, 637.0);
  const double ratio = std::abs(kappa) / std::abs(f.cm.M(0, 1));
  // Independent routes to the same physical coupling. The direct overlap runs
  // ~15% above the inversion for this pair; the gap is the mode
  // non-orthogonality the first-order overlap integral drops.
  CHECK(ratio > 0.95);
  CHECK(ratio < 1.35);
}

TEST_CASE("amplitude extraction needs one supermode per slot") {
  const auto& f = pair_fixture();
  SupermodeSet broken = f.set;
  broken.modes.resize(1);
  CHECK_THROWS_WITH_AS(extract_amplitudes(broken), doctest::Contains("unable to support"),
                       SolveError);
}

TEST_CASE("inversion input validation") {
  const auto& f = pair_fixture();
  AmplitudeMatrix amp = extract_amplitudes(f.set);
  CHECK_THROWS_AS(nacmt(amp, {1.0}, 0.0), ConfigError);  // chi count mismatch
  AmplitudeMatrix singular = amp;
  singular.A.col(1) = singular.A.col(0);
  CHECK_THROWS_AS(nacmt(singular, {13.0, 13.0}, 0.0), SolveError);
}

TEST_CASE("five-guide reference matrix grades as tight binding") {
  // Metrics frozen from an independent evaluation of the literal matrix.
  const double rows[5][5] = {{0.1574, 2.6420, -0.1775, 0.0196, -0.0025},
                             {2.6284, 0.3032, 2.6262, -0.1756, 0.0191},
                             {-0.1754, 2.6267, 0.3046, 2.6263, -0.1757},
                             {0.0192, -0.1761, 2.6269, 0.3041, 2.6276},
                             {0.0026, 0.0196, -0.1780, 2.6427, 0.1560}};
  CouplingMatrix cm;
  cm.M = literal5(rows);
  cm.beta_ref = 0.0;
  const TightBindingReport rep = analyze_tight_binding(cm);
  CHECK(rep.nn_coupling == doctest::Approx(2.63085).epsilon(1e-9));
  CHECK(rep.nnn_ratio == doctest::Approx(0.06704423792057067).epsilon(1e-9));
  CHECK(rep.asymmetry == doctest::Approx(0.004024555243832216).epsilon(1e-9));
  CHECK(rep.self_coupling == doctest::Approx(0.24506).epsilon(1e-9));
  CHECK(rep.verdict == "tight_binding_ok");
}

TEST_CASE("shared-rod reference matrix grades as unsuitable") {
  const double rows[5][5] = {{241.578, 21.076, 0.820, -2.350, 1.309},
                             {27.712, 228.497, 29.854, -5.124, 1.168},
                             {-5.026, 30.684, 226.753, 30.678, -5.102},
                             {1.184, -5.198, 29.803, 228.677, 27.676},
                             {1.201, -2.110, 0.429, 21.461, 241.212}};
  CouplingMatrix cm;
  cm.M = literal5(rows);
  cm.beta_ref = 0.0;
  const TightBindingReport rep = analyze_tight_binding(cm);
  CHECK(rep.nn_coupling == doctest::Approx(27.368).epsilon(1e-9));
  CHECK(rep.nnn_ratio == doctest::Approx(0.13214337912890967).epsilon(1e-9));
  CHECK(rep.asymmetry == doctest::Approx(0.23522408445831888).epsilon(1e-9));
  CHECK(rep.verdict == "unsuitable");
}

TEST_CASE("tight-binding grading edge cases") {
  CouplingMatrix cm;
  cm.M = MatrixXd::Identity(3, 3) * 150.0;  // no off-diagonal coupling at all
  const TightBindingReport rep = analyze_tight_binding(cm);
  CHECK(rep.verdict == "unsuitable");

  CouplingMatrix tiny;
  tiny.M = MatrixXd::Identity(1, 1);
  CHECK_THROWS_AS(analyze_tight_binding(tiny), ConfigError);
}
