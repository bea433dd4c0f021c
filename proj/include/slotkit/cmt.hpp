#pragma once

#include "slotkit/modesolver.hpp"

namespace slotkit {

// Supermodes of a coupled array plus the slot centres they are sampled at.
struct SupermodeSet {
  std::vector<ModeSolution> modes;   // n_eff descending
  std::vector<double> slot_centers;  // nm
  double lambda_nm = 0.0;
};

SupermodeSet collect_supermodes(const IndexMap& map, const SolveRequest& req);

// A(m, j) = field of supermode j at slot centre m, sampled at mid-height.
struct AmplitudeMatrix {
  MatrixXd A;
  double condition_number = 0.0;
};

// Coupling matrix in rad^2/um^2. beta_ref is the isolated-guide propagation
// constant (rad/um) used when reporting self-coupling; 0 means the matrix
// diagonal already excludes the beta^2 offset.
struct CouplingMatrix {
  MatrixXd M;
  double beta_ref = 0.0;
  std::vector<std::string> notes;
};

struct TightBindingReport {
  double nn_coupling = 0.0;    // mean |M[n][n+-1]|
  double nnn_ratio = 0.0;      // mean |M[n][n+-2]| / nn_coupling
  double asymmetry = 0.0;      // ||M - M^T||_F / ||offdiag(M)||_F
  double self_coupling = 0.0;  // mean M[n][n] - beta_ref^2
  std::string verdict;         // tight_binding_ok | marginal | unsuitable
};

// Sample every supermode at every slot centre. Throws SolveError when the set
// holds fewer modes than slots (the array does not support enough supermodes).
AmplitudeMatrix extract_amplitudes(const SupermodeSet& set);

// Numerically assisted coupled-mode inversion: M = A diag(chi^2) A^{-1},
// chi in rad/um, one entry per column of A.
CouplingMatrix nacmt(const AmplitudeMatrix& amp, const std::vector<double>& chi,
                     double beta_ref);

// Convenience: supermodes -> amplitudes -> coupling matrix.
CouplingMatrix nacmt_from_modes(const SupermodeSet& set, double beta_ref);

// Direct overlap route for one matrix element:
//   kappa = k^2 Int (n_full^2 - n_one^2) E_m E_n dx dy
// with both fields L2-normalised over the cross-section (units rad^2/um^2).
// `one_guide` must share the full map's grid and contain a single guide.
double direct_kappa(const IndexMap& full, const IndexMap& one_guide,
                    const ModeSolution& mode_m, const ModeSolution& mode_n,
                    double lambda_nm);

// Classify how well M matches a nearest-neighbour tight-binding model.
//   tight_binding_ok  : nnn_ratio < 0.1 and asymmetry < 0.02 and self/nn < 0.3
//   unsuitable        : nnn_ratio > 0.2 or asymmetry > 0.1 (or no coupling)
//   marginal          : anything between
TightBindingReport analyze_tight_binding(const CouplingMatrix& cm);

}  // namespace slotkit
