#include "slotkit/cmt.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slotkit {

SupermodeSet collect_supermodes(const IndexMap& map, const SolveRequest& req) {
  SupermodeSet set;
  set.modes = solve_te_modes(map, req);
  set.slot_centers = map.slot_centers;
  set.lambda_nm = req.lambda_nm;
  return set;
}

AmplitudeMatrix extract_amplitudes(const SupermodeSet& set) {
  const int n = static_cast<int>(set.slot_centers.size());
  if (n == 0) throw ConfigError("amplitude extraction needs at least one slot centre");
  if (static_cast<int>(set.modes.size()) < n) {
    std::ostringstream msg;
    msg << "unable to support " << n << " modes: only " << set.modes.size()
        << " guided supermodes found";
    throw SolveError(msg.str());
  }
  AmplitudeMatrix out;
  out.A.resize(n, n);
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j) out.A(m, j) = set.modes[j].field_at(set.slot_centers[m], 0.0);
  Eigen::JacobiSVD<MatrixXd> svd(out.A);
  const auto& sv = svd.singularValues();
  out.condition_number = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1)
                                         : std::numeric_limits<double>::infinity();
  return out;
}

CouplingMatrix nacmt(const AmplitudeMatrix& amp, const std::vector<double>& chi,
                     double beta_ref) {
  const auto n = amp.A.rows();
  if (amp.A.cols() != n) throw ConfigError("amplitude matrix must be square");
  if (static_cast<long>(chi.size()) != n)
    throw ConfigError("one supermode propagation constant per amplitude column required");

  Eigen::FullPivLU<MatrixXd> lu(amp.A);
  if (!lu.isInvertible())
    throw SolveError("amplitude matrix is singular: sampled supermodes do not distinguish the slots");

  VectorXd chi2(n);
  for (long j = 0; j < n; ++j) chi2[j] = chi[j] * chi[j];

  CouplingMatrix out;
  out.M = amp.A * chi2.asDiagonal() * lu.inverse();
  out.beta_ref = beta_ref;
  if (amp.condition_number >= 1e6) {
    std::ostringstream note;
    note << "amplitude matrix condition number " << amp.condition_number
         << " exceeds 1e6; coupling entries may be unreliable";
    out.notes.push_back(note.str());
  }
  return out;
}

CouplingMatrix nacmt_from_modes(const SupermodeSet& set, double beta_ref) {
  AmplitudeMatrix amp = extract_amplitudes(set);
  std::vector<double> chi;
  chi.reserve(set.slot_centers.size());
  for (std::size_t j = 0; j < set.slot_centers.size(); ++j) chi.push_back(set.modes[j].beta);
  return nacmt(amp, chi, beta_ref);
}

double direct_kappa(const IndexMap& full, const IndexMap& one_guide,
                    const ModeSolution& mode_m, const ModeSolution& mode_n,
                    double lambda_nm) {
  if (full.nx != one_guide.nx || full.ny != one_guide.ny || full.dx != one_guide.dx ||
      full.dy != one_guide.dy || full.origin_x != one_guide.origin_x ||
      full.origin_y != one_guide.origin_y)
    throw ConfigError("direct coupling integral needs both maps on the same grid");
  for (const ModeSolution* mode : {&mode_m, &mode_n})
    if (mode->grid.nx != full.nx || mode->grid.ny != full.ny ||
        mode->grid.dx != full.dx || mode->grid.dy != full.dy)
      throw ConfigError("mode fields must live on the perturbation grid");
  if (lambda_nm <= 0.0) throw ConfigError("wavelength must be positive");

  const double k = vacuum_wavenumber(lambda_nm);
  // kappa = k^2 Int (eps_full - eps_one) Em En dA over L2-normalised fields;
  // the cell area cancels between the integral and the two normalisations.
  double overlap = 0.0, norm_m = 0.0, norm_n = 0.0;
  for (int i = 0; i < full.nx; ++i) {
    for (int j = 0; j < full.ny; ++j) {
      const double em = mode_m.field(i, j), en = mode_n.field(i, j);
      overlap += (full.eps(i, j) - one_guide.eps(i, j)) * em * en;
      norm_m += em * em;
      norm_n += en * en;
    }
  }
  if (norm_m <= 0.0 || norm_n <= 0.0) throw ConfigError("zero mode field");
  return k * k * overlap / std::sqrt(norm_m * norm_n);
}

TightBindingReport analyze_tight_binding(const CouplingMatrix& cm) {
  const auto n = cm.M.rows();
  if (n < 2 || cm.M.cols() != n)
    throw ConfigError("tight-binding analysis needs a square matrix of at least two guides");

  TightBindingReport rep;
  double nn_sum = 0.0, nnn_sum = 0.0;
  int nn_cnt = 0, nnn_cnt = 0;
  for (long i = 0; i + 1 < n; ++i) {
    nn_sum += std::abs(cm.M(i, i + 1)) + std::abs(cm.M(i + 1, i));
    nn_cnt += 2;
  }
  for (long i = 0; i + 2 < n; ++i) {
    nnn_sum += std::abs(cm.M(i, i + 2)) + std::abs(cm.M(i + 2, i));
    nnn_cnt += 2;
  }
  rep.nn_coupling = nn_cnt ? nn_sum / nn_cnt : 0.0;
  rep.nnn_ratio = (rep.nn_coupling > 0.0 && nnn_cnt) ? (nnn_sum / nnn_cnt) / rep.nn_coupling : 0.0;
  rep.self_coupling = cm.M.diagonal().mean() - cm.beta_ref * cm.beta_ref;

  // Measured against the off-diagonal norm: the (large, symmetric) diagonal
  // would otherwise swamp the asymmetry of the couplings themselves.
  MatrixXd off = cm.M;
  off.diagonal().setZero();
  const double off_norm = off.norm();
  rep.asymmetry = off_norm > 0.0 ? (cm.M - cm.M.transpose()).norm() / off_norm : 0.0;

  if (rep.nn_coupling <= 0.0 || rep.nnn_ratio > 0.2 || rep.asymmetry > 0.1) {
    rep.verdict = "unsuitable";
  } else if (rep.nnn_ratio < 0.1 && rep.asymmetry < 0.02 &&
             std::abs(rep.self_coupling) / rep.nn_coupling < 0.3) {
    rep.verdict = "tight_binding_ok";
  } else {
    rep.verdict = "marginal";
  }
  return rep;
}

}  // namespace slotkit
