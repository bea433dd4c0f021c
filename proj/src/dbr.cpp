#include "slotkit/dbr.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace slotkit {

double GratingStack::length_nm() const {
  double total = 0.0;
  for (const auto& s : sections) total += s.length_nm;
  return total;
}

GratingStack build_grating(double period_nm, double duty, double n_periods, double n_lo,
                           double n_hi, double surround) {
  if (period_nm <= 0.0) throw ConfigError("grating period must be positive");
  if (duty <= 0.0 || duty >= 1.0) throw ConfigError("duty cycle must lie strictly between 0 and 1");
  if (n_lo < 1.0 || n_hi < 1.0 || surround < 1.0)
    throw ConfigError("section indices must be at least 1");
  const double doubled = 2.0 * n_periods;
  const int n_seg = static_cast<int>(std::lround(doubled));
  if (n_seg < 1 || std::abs(doubled - n_seg) > 1e-9)
    throw ConfigError("period count must be a positive multiple of 0.5");

  GratingStack g;
  g.period_nm = period_nm;
  g.duty = duty;
  g.n_periods = n_periods;
  g.n_lo = n_lo;
  g.n_hi = n_hi;
  g.surround = surround;
  g.sections.reserve(n_seg);
  for (int s = 0; s < n_seg; ++s) {
    const bool solid = (s % 2 == 0);  // n_hi segment faces the cavity
    g.sections.push_back({solid ? n_hi : n_lo, period_nm * (solid ? duty : 1.0 - duty)});
  }
  return g;
}

Matrix2c interface_matrix(double n_a, double n_b) {
  const double r = (n_a - n_b) / (n_a + n_b);
  const double inv_t = (n_a + n_b) / (2.0 * n_a);
  Matrix2c m;
  m << inv_t, r * inv_t, r * inv_t, inv_t;
  return m;
}

Matrix2c propagation_matrix(double n, double length_nm, double lambda_nm) {
  const double delta = 2.0 * M_PI * n * length_nm / lambda_nm;
  Matrix2c m = Matrix2c::Zero();
  m(0, 0) = std::exp(Complex(0.0, -delta));
  m(1, 1) = std::exp(Complex(0.0, delta));
  return m;
}

StackResponse transfer_matrix(const GratingStack& stack, double lambda_nm) {
  if (lambda_nm <= 0.0) throw ConfigError("wavelength must be positive");
  Matrix2c M = Matrix2c::Identity();
  double prev = stack.surround;
  for (const auto& s : stack.sections) {
    M = M * interface_matrix(prev, s.n_eff) * propagation_matrix(s.n_eff, s.length_nm, lambda_nm);
    prev = s.n_eff;
  }
  M = M * interface_matrix(prev, stack.surround);

  StackResponse resp;
  resp.r = M(1, 0) / M(0, 0);
  resp.t = 1.0 / M(0, 0);  // entry and exit media coincide (stack.surround)
  resp.R = std::norm(resp.r);
  resp.T = 1.0 - resp.R;   // lossless with real indices
  return resp;
}

std::vector<ReflectivitySweep> reflectivity_sweep(const std::vector<double>& period_nm,
                                                  const std::vector<double>& n_periods,
                                                  double duty, double n_lo, double n_hi,
                                                  double surround, double lambda_nm,
                                                  int n_threads) {
  if (period_nm.empty() || n_periods.empty()) throw ConfigError("empty sweep range");

  std::vector<ReflectivitySweep> out(n_periods.size());
  for (std::size_t a = 0; a < n_periods.size(); ++a) {
    out[a].n_periods = n_periods[a];
    out[a].period_nm = period_nm;
    out[a].R.assign(period_nm.size(), 0.0);
  }

  const std::size_t total = n_periods.size() * period_nm.size();
  auto work = [&](std::size_t flat) {
    const std::size_t a = flat / period_nm.size(), b = flat % period_nm.size();
    const GratingStack g =
        build_grating(period_nm[b], duty, n_periods[a], n_lo, n_hi, surround);
    out[a].R[b] = transfer_matrix(g, lambda_nm).R;
  };

  const int nt = std::max(1, std::min<int>(n_threads, static_cast<int>(total)));
  if (nt == 1) {
    for (std::size_t f = 0; f < total; ++f) work(f);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t f = t; f < total; f += nt) work(f);
      });
    for (auto& th : pool) th.join();
  }

  for (auto& sweep : out) {
    std::size_t best = 0;
    for (std::size_t b = 1; b < sweep.R.size(); ++b)
      if (sweep.R[b] > sweep.R[best]) best = b;
    sweep.peak_period_nm = sweep.period_nm[best];
    sweep.peak_R = sweep.R[best];
  }
  return out;
}

std::pair<double, double> effective_section_indices(const IndexMap& slot_map,
                                                    const IndexMap& solid_map,
                                                    double lambda_nm) {
  SolveRequest req;
  req.num_modes = 1;
  req.lambda_nm = lambda_nm;
  const auto lo = solve_te_modes(slot_map, req);
  const auto hi = solve_te_modes(solid_map, req);
  if (lo.empty()) throw SolveError("slot grating section supports no guided mode");
  if (hi.empty()) throw SolveError("solid grating section supports no guided mode");
  return {lo.front().n_eff, hi.front().n_eff};
}

}  // namespace slotkit
