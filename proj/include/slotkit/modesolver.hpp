#pragma once

#include "slotkit/geometry.hpp"

namespace slotkit {

struct SolveRequest {
  int num_modes = 1;
  double lambda_nm = 637.0;
  // Effective-index acceptance window; 0 means auto (n_cl .. n_max).
  double n_eff_min = 0.0;
  double n_eff_max = 0.0;

  // Solver knobs; the defaults are production settings.
  double ritz_tol = 1e-12;   // relative residual on the transformed eigenvalue
  int max_subspace = 300;    // Krylov dimension cap
  int extra_ritz = 6;        // converged pairs beyond num_modes, for windowing
  std::uint64_t seed = 0x51077ED5ull;  // start-vector seed; fixed for reproducibility
};

struct GridInfo {
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0, origin_x = 0.0, origin_y = 0.0;
};

struct ModeSolution {
  double n_eff = 0.0;
  double beta = 0.0;       // rad/um
  double lambda_nm = 0.0;
  bool guided = false;
  bool degenerate_pair = false;  // another returned mode within 1e-9 in n_eff
  double residual = 0.0;   // ||L e - beta^2 e|| / ||e||, rad^2/um^2
  GridInfo grid;
  ArrayXXd field;          // E_x on (nx, ny), peak-normalised to 1

  // Bilinear interpolation of the field at a physical point (nm).
  // Throws std::out_of_range outside the domain.
  double field_at(double x_nm, double y_nm) const;
};

// Semivectorial quasi-TE modes (dominant E_x) of the rasterised cross-section.
// Five-point stencil with permittivity-weighted x-coefficients, Dirichlet
// walls, shift-invert Arnoldi about (n_max k)^2. Returns the guided modes
// inside the window, n_eff descending, at most req.num_modes of them.
// Throws SolveError if the eigensolver fails to converge.
std::vector<ModeSolution> solve_te_modes(const IndexMap& map, const SolveRequest& req);

// Analytic symmetric-slab references (bisection to 1e-10 in n_eff), descending.
// TE: field tangential to the interfaces; TM: field normal (with the eps^2
// weight in the dispersion relation).
std::vector<double> slab_te_modes(double n_core, double n_clad, double thickness_nm,
                                  double lambda_nm);
std::vector<double> slab_tm_modes(double n_core, double n_clad, double thickness_nm,
                                  double lambda_nm);

}  // namespace slotkit
