#pragma once

#include "slotkit/modesolver.hpp"

namespace slotkit {

// Photon hopping rate between laterally coupled cavities (rad/s):
//   J = c kappa / (2 n_eff k), kappa in rad^2/um^2, k the vacuum wavenumber.
double lateral_rate(double kappa, double n_eff, double lambda_nm);

// Penetration depth of a grating mirror folded into an effective length (um):
//   L_eff = L_gr sqrt(R) / (2 atanh(sqrt(R)));  L_eff(R->0) = L_gr/2, L_eff(1) = 0.
double effective_length(double L_gr_um, double R);

// Mirror-adjusted cavity length: L_c + 2 L_eff (um).
double adjusted_length(double L_c_um, double L_eff_um);

// Photon round-trip lifetime tau = L_hat N_eff / c (seconds).
double cavity_lifetime(double L_hat_um, double N_eff);

// End-to-end hopping rate through shared mirrors (rad/s):
//   J = 2 pi (1 - sqrt(R)) / tau.
double end_to_end_rate(double R, double L_hat_um, double N_eff);

struct ModeVolume {
  double V_um3 = 0.0;
  double V_lambda3_over_n = 0.0;  // V in units of lambda^3/n_rod
  double n_at_max = 0.0;          // refractive index at the energy-density peak
  double A_eff_um2 = 0.0;         // transverse effective area
};

// V = [ Int n^2 |E|^2 dA / max(n^2 |E|^2) ] * (L_hat/2); the longitudinal
// standing-wave factor integrates to half the adjusted length. Invariant to
// the field normalisation.
ModeVolume mode_volume(const ModeSolution& mode, const IndexMap& map, double L_hat_um);

// Vacuum Rabi frequency of a dipole at the field maximum (rad/s):
//   Omega = 2 (d/hbar) sqrt( hbar omega / (2 eps0 n^2 V) ).
double rabi_frequency(double V_um3, double dipole_Cm, double lambda_nm, double n_at_max);

}  // namespace slotkit
