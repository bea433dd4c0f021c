#include "slotkit/coupling.hpp"

#include <cmath>

namespace slotkit {

double lateral_rate(double kappa, double n_eff, double lambda_nm) {
  if (kappa < 0.0) throw ConfigError("coupling magnitude must be non-negative");
  if (n_eff < 1.0) throw ConfigError("effective index must be at least 1");
  if (lambda_nm <= 0.0) throw ConfigError("wavelength must be positive");
  const double k = vacuum_wavenumber(lambda_nm);
  return phys::c_um_per_s * kappa / (2.0 * n_eff * k);
}

double effective_length(double L_gr_um, double R) {
  if (L_gr_um < 0.0) throw ConfigError("grating length must be non-negative");
  if (R < 0.0 || R > 1.0) throw ConfigError("reflectivity must lie in [0, 1]");
  if (R == 0.0) return 0.5 * L_gr_um;  // limit of sqrt(R)/(2 atanh sqrt(R)) at R -> 0
  if (R == 1.0) return 0.0;            // atanh diverges; penetration vanishes
  const double s = std::sqrt(R);
  return L_gr_um * s / (2.0 * std::atanh(s));
}

double adjusted_length(double L_c_um, double L_eff_um) {
  if (L_c_um < 0.0 || L_eff_um < 0.0) throw ConfigError("lengths must be non-negative");
  return L_c_um + 2.0 * L_eff_um;
}

double cavity_lifetime(double L_hat_um, double N_eff) {
  if (L_hat_um <= 0.0) throw ConfigError("adjusted cavity length must be positive");
  if (N_eff < 1.0) throw ConfigError("effective index must be at least 1");
  return L_hat_um * N_eff / phys::c_um_per_s;
}

double end_to_end_rate(double R, double L_hat_um, double N_eff) {
  if (R < 0.0 || R > 1.0) throw ConfigError("reflectivity must lie in [0, 1]");
  const double tau = cavity_lifetime(L_hat_um, N_eff);
  return 2.0 * M_PI * (1.0 - std::sqrt(R)) / tau;
}

ModeVolume mode_volume(const ModeSolution& mode, const IndexMap& map, double L_hat_um) {
  if (mode.grid.nx != map.nx || mode.grid.ny != map.ny || mode.grid.dx != map.dx ||
      mode.grid.dy != map.dy)
    throw ConfigError("mode and index map must share a grid");
  if (L_hat_um <= 0.0) throw ConfigError("adjusted cavity length must be positive");

  const ArrayXXd density = map.eps * mode.field.square();  // n^2 |E|^2
  Eigen::Index pi = 0, pj = 0;
  const double peak = density.maxCoeff(&pi, &pj);
  if (peak <= 0.0) throw ConfigError("zero mode field");

  const double dA = nm_to_um(map.dx) * nm_to_um(map.dy);
  ModeVolume v;
  v.A_eff_um2 = density.sum() * dA / peak;
  // The longitudinal sin^2 profile integrates to half the adjusted length.
  v.V_um3 = v.A_eff_um2 * 0.5 * L_hat_um;
  v.n_at_max = std::sqrt(map.eps(pi, pj));
  const double lambda_um = nm_to_um(mode.lambda_nm);
  v.V_lambda3_over_n = v.V_um3 / (lambda_um * lambda_um * lambda_um / map.n_max);
  return v;
}

double rabi_frequency(double V_um3, double dipole_Cm, double lambda_nm, double n_at_max) {
  if (V_um3 <= 0.0) throw ConfigError("mode volume must be positive");
  if (dipole_Cm < 0.0) throw ConfigError("dipole moment must be non-negative");
  if (lambda_nm <= 0.0) throw ConfigError("wavelength must be positive");
  if (n_at_max < 1.0) throw ConfigError("index at the field maximum must be at least 1");
  const double omega = 2.0 * M_PI * phys::c_m_per_s / (lambda_nm * 1e-9);
  const double V_m3 = V_um3 * 1e-18;
  const double field =
      std::sqrt(phys::hbar_J_s * omega /
                (2.0 * phys::eps0_F_per_m * n_at_max * n_at_max * V_m3));
  return 2.0 * dipole_Cm / phys::hbar_J_s * field;
}

}  // namespace slotkit
