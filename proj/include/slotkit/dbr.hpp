#pragma once

#include "slotkit/geometry.hpp"
#include "slotkit/modesolver.hpp"

namespace slotkit {

struct Section {
  double n_eff = 1.0;
  double length_nm = 0.0;
};

// Alternating solid/slot grating, described by effective indices per section.
// Sections start with a solid (n_hi) segment adjacent to the cavity; a
// half-integer period count gives an odd segment count ending on n_hi
// (mirror-symmetric grating). duty is the solid fraction of a period.
struct GratingStack {
  std::vector<Section> sections;
  double period_nm = 0.0;
  double duty = 0.5;
  double n_periods = 0.0;
  double n_lo = 1.0, n_hi = 1.0;
  double surround = 1.0;  // index of the waveguide on both sides

  double length_nm() const;
};

GratingStack build_grating(double period_nm, double duty, double n_periods, double n_lo,
                           double n_hi, double surround);

// Field-amplitude transfer matrices. det(interface) = n_b/n_a,
// det(propagation) = 1 with unit-modulus diagonal.
Matrix2c interface_matrix(double n_a, double n_b);
Matrix2c propagation_matrix(double n, double length_nm, double lambda_nm);

struct StackResponse {
  double R = 0.0;
  double T = 0.0;  // 1 - R (lossless, real indices)
  Complex r, t;
};

StackResponse transfer_matrix(const GratingStack& stack, double lambda_nm);

struct ReflectivitySweep {
  double n_periods = 0.0;
  std::vector<double> period_nm;
  std::vector<double> R;
  double peak_period_nm = 0.0;  // argmax over the swept periods
  double peak_R = 0.0;
};

// R(P) per period count; points are independent, computed in parallel when
// n_threads > 1 and written by index (bit-deterministic for any thread count).
std::vector<ReflectivitySweep> reflectivity_sweep(const std::vector<double>& period_nm,
                                                  const std::vector<double>& n_periods,
                                                  double duty, double n_lo, double n_hi,
                                                  double surround, double lambda_nm,
                                                  int n_threads = 1);

// Fundamental-mode effective indices of the two grating sections (slot and
// solid cross-sections solved on their own maps). Returns {n_lo, n_hi}.
std::pair<double, double> effective_section_indices(const IndexMap& slot_map,
                                                    const IndexMap& solid_map,
                                                    double lambda_nm);

}  // namespace slotkit
