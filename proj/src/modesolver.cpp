#include "slotkit/modesolver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace slotkit {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Quasi-TE operator with L e = beta^2 e:
//   d/dx[(1/eps) d(eps E)/dx] + d2E/dy2 + k^2 eps E
// on cell centres. The x-flux between neighbouring cells follows from
// continuity of eps*E and of the flux at the shared wall,
//   F = 2 (eps_E E_E - eps_P E_P) / (dx (eps_P + eps_E)),
// which yields the permittivity-weighted coefficients below. The y-coupling
// is the plain Laplacian (E_x is continuous across y-normal walls). Domain
// walls are perfect electric conductors: ghost cells with E = 0.
SpMat assemble(const IndexMap& map, double k_um) {
  const int nx = map.nx, ny = map.ny;
  const double dx = nm_to_um(map.dx), dy = nm_to_um(map.dy);
  const double ax = 1.0 / (dx * dx), ay = 1.0 / (dy * dy);
  const double k2 = k_um * k_um;
  const auto& eps = map.eps;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nx) * ny * 5);
  auto idx = [ny](int i, int j) { return i * ny + j; };

  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double ep = eps(i, j);
      double diag = k2 * ep;
      if (i + 1 < nx) {
        const double ee = eps(i + 1, j);
        trip.emplace_back(idx(i, j), idx(i + 1, j), 2.0 * ax * ee / (ep + ee));
        diag -= 2.0 * ax * ep / (ep + ee);
      } else {
        diag -= ax;
      }
      if (i > 0) {
        const double ew = eps(i - 1, j);
        trip.emplace_back(idx(i, j), idx(i - 1, j), 2.0 * ax * ew / (ep + ew));
        diag -= 2.0 * ax * ep / (ep + ew);
      } else {
        diag -= ax;
      }
      if (j + 1 < ny) trip.emplace_back(idx(i, j), idx(i, j + 1), ay);
      if (j > 0) trip.emplace_back(idx(i, j), idx(i, j - 1), ay);
      diag -= 2.0 * ay;
      trip.emplace_back(idx(i, j), idx(i, j), diag);
    }
  }
  SpMat L(static_cast<long>(nx) * ny, static_cast<long>(nx) * ny);
  L.setFromTriplets(trip.begin(), trip.end());
  L.makeCompressed();
  return L;
}

struct RitzPair {
  double theta = 0.0;       // eigenvalue of (L - sigma I)^-1
  VectorXd y;               // eigenvector of the Hessenberg block
  double est_residual = 0.0;
};

// Ritz pairs of the leading m x m Hessenberg block, |theta| descending.
// Complex pairs are skipped: guided modes of this operator are real.
std::vector<RitzPair> ritz_pairs(const MatrixXd& H, int m, int keep) {
  Eigen::EigenSolver<MatrixXd> es(H.topLeftCorner(m, m));
  std::vector<RitzPair> pairs;
  for (int i = 0; i < m; ++i) {
    const Complex th = es.eigenvalues()[i];
    if (std::abs(th.imag()) > 1e-8 * std::abs(th)) continue;
    RitzPair p;
    p.theta = th.real();
    p.y = es.eigenvectors().col(i).real();
    const double yn = p.y.norm();
    if (yn < 1e-12) continue;
    p.y /= yn;
    p.est_residual = std::abs(H(m, m - 1)) * std::abs(p.y[m - 1]);
    pairs.push_back(std::move(p));
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const RitzPair& a, const RitzPair& b) { return std::abs(a.theta) > std::abs(b.theta); });
  if (static_cast<int>(pairs.size()) > keep) pairs.resize(keep);
  return pairs;
}

struct ArnoldiOutcome {
  std::vector<RitzPair> pairs;
  std::vector<VectorXd> basis;
  int iterations = 0;
};

// Shift-invert Arnoldi on (L - sigma I)^-1 with full two-pass Gram-Schmidt.
// The start vector is drawn from a fixed-seed generator: runs are
// bit-reproducible, and unlike a structured vector (all ones, say) it is not
// confined to a symmetry subspace that would hide the odd modes.
ArnoldiOutcome shift_invert_arnoldi(const SpMat& L, double sigma, int wanted,
                                    const SolveRequest& req) {
  SpMat A = L;
  for (int c = 0; c < A.outerSize(); ++c)
    for (SpMat::InnerIterator it(A, c); it; ++it)
      if (it.row() == it.col()) it.valueRef() -= sigma;
  Eigen::SparseLU<SpMat> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw SolveError("shift-invert factorisation failed (singular shifted operator)");

  const long n = L.rows();
  std::mt19937_64 rng(req.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  VectorXd v0(n);
  for (long i = 0; i < n; ++i) v0[i] = uni(rng);
  v0.normalize();

  const int m_max = static_cast<int>(std::min<long>(req.max_subspace, n));
  ArnoldiOutcome out;
  out.basis.reserve(m_max + 1);
  out.basis.push_back(v0);
  MatrixXd H = MatrixXd::Zero(m_max + 1, m_max);

  for (int j = 0; j < m_max; ++j) {
    VectorXd w = lu.solve(out.basis[j]);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const double hij = out.basis[i].dot(w);
        w -= hij * out.basis[i];
        H(i, j) += hij;
      }
    }
    const double hnext = w.norm();
    H(j + 1, j) = hnext;
    const int m = j + 1;
    out.iterations = m;
    if (hnext < 1e-13) {
      // Invariant subspace: the Ritz pairs of the closed block are exact.
      out.pairs = ritz_pairs(H, m, wanted + 4);
      return out;
    }
    out.basis.push_back(w / hnext);
    const bool checkpoint = (m >= std::max(2 * wanted, 20)) && (m % 10 == 0 || m == m_max);
    if (checkpoint) {
      auto pairs = ritz_pairs(H, m, wanted + 4);
      const int have = std::min<int>(wanted, pairs.size());
      const bool done =
          have == wanted && std::all_of(pairs.begin(), pairs.begin() + have, [&](const RitzPair& p) {
            return p.est_residual <= req.ritz_tol * std::abs(p.theta);
          });
      if (done || m == m_max) {
        out.pairs = std::move(pairs);
        if (done) return out;
      }
    }
  }

  std::ostringstream msg;
  msg << "eigensolver failed to converge: Krylov dimension " << m_max << ", " << wanted
      << " pairs requested; leading relative residuals:";
  for (std::size_t i = 0; i < out.pairs.size() && i < static_cast<std::size_t>(wanted); ++i)
    msg << " " << out.pairs[i].est_residual / std::max(std::abs(out.pairs[i].theta), 1e-300);
  throw SolveError(msg.str());
}

}  // namespace

double ModeSolution::field_at(double x_nm, double y_nm) const {
  const auto& g = grid;
  const double xmax = g.origin_x + g.nx * g.dx, ymax = g.origin_y + g.ny * g.dy;
  if (x_nm < g.origin_x || x_nm > xmax || y_nm < g.origin_y || y_nm > ymax)
    throw std::out_of_range("field_at: point outside the solved domain");
  // The outer half-cell ring extends the edge-adjacent linear patch.
  double fx = (x_nm - g.origin_x) / g.dx - 0.5;
  double fy = (y_nm - g.origin_y) / g.dy - 0.5;
  fx = std::clamp(fx, 0.0, static_cast<double>(g.nx - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(g.ny - 1));
  const int i0 = std::min(static_cast<int>(fx), g.nx - 2);
  const int j0 = std::min(static_cast<int>(fy), g.ny - 2);
  const double tx = fx - i0, ty = fy - j0;
  return field(i0, j0) * (1 - tx) * (1 - ty) + field(i0 + 1, j0) * tx * (1 - ty) +
         field(i0, j0 + 1) * (1 - tx) * ty + field(i0 + 1, j0 + 1) * tx * ty;
}

std::vector<ModeSolution> solve_te_modes(const IndexMap& map, const SolveRequest& req) {
  if (map.nx < 3 || map.ny < 3) throw ConfigError("grid too small to solve");
  if (req.num_modes < 1) throw ConfigError("num_modes must be >= 1");
  const int n_guides = static_cast<int>(std::max<std::size_t>(map.slot_centers.size(), 1));
  if (req.num_modes > 3 * n_guides) throw ConfigError("num_modes exceeds 3 modes per guide");
  if (req.lambda_nm <= 0.0) throw ConfigError("wavelength must be positive");

  const double k = vacuum_wavenumber(req.lambda_nm);
  const double win_lo = req.n_eff_min > 0.0 ? req.n_eff_min : std::max(map.n_cl, 1.0);
  const double win_hi = std::min(req.n_eff_max > 0.0 ? req.n_eff_max : map.n_max, map.n_max);
  if (win_lo >= win_hi) throw ConfigError("empty effective-index window");

  const SpMat L = assemble(map, k);
  // Shift just above the largest attainable beta^2: the guided modes become
  // the nearest eigenvalues, so shift-inversion orders them first.
  const double sigma = map.n_max * map.n_max * k * k * (1.0 + 1e-6);
  const int wanted = req.num_modes + req.extra_ritz;
  ArnoldiOutcome arn = shift_invert_arnoldi(L, sigma, wanted, req);

  std::vector<ModeSolution> modes;
  for (const auto& p : arn.pairs) {
    const double beta2 = sigma + 1.0 / p.theta;
    if (beta2 <= 0.0) continue;
    const double n_eff = std::sqrt(beta2) / k;
    if (n_eff <= map.n_cl) continue;                 // not guided
    if (n_eff < win_lo || n_eff > win_hi) continue;  // outside the window

    VectorXd x = VectorXd::Zero(L.rows());
    for (int i = 0; i < p.y.size(); ++i) x += p.y[i] * arn.basis[i];
    x.normalize();
    const double residual = (L * x - beta2 * x).norm();
    if (residual > 1e-8 * k * k) {
      std::ostringstream msg;
      msg << "eigenpair residual " << residual << " rad^2/um^2 exceeds 1e-8 k^2 after "
          << arn.iterations << " iterations";
      throw SolveError(msg.str());
    }

    ModeSolution mode;
    mode.n_eff = n_eff;
    mode.beta = n_eff * k;
    mode.lambda_nm = req.lambda_nm;
    mode.guided = true;
    mode.residual = residual;
    mode.grid = {map.nx, map.ny, map.dx, map.dy, map.origin_x, map.origin_y};
    mode.field.resize(map.nx, map.ny);
    for (int i = 0; i < map.nx; ++i)
      for (int j = 0; j < map.ny; ++j) mode.field(i, j) = x[static_cast<long>(i) * map.ny + j];
    modes.push_back(std::move(mode));
  }

  std::sort(modes.begin(), modes.end(),
            [](const ModeSolution& a, const ModeSolution& b) { return a.n_eff > b.n_eff; });
  if (static_cast<int>(modes.size()) > req.num_modes) modes.resize(req.num_modes);

  for (auto& mode : modes) {
    // Peak-normalise, then fix the sign at the leftmost slot centre with a
    // usable amplitude (fall back to the field peak for slot-less maps).
    const double peak = mode.field.abs().maxCoeff();
    mode.field /= peak;
    double anchor = 0.0;
    for (double cx : map.slot_centers) {
      const double v = mode.field_at(cx, 0.0);
      if (std::abs(v) >= 1e-9) {
        anchor = v;
        break;
      }
    }
    if (anchor == 0.0) {
      Eigen::Index pi = 0, pj = 0;
      mode.field.abs().maxCoeff(&pi, &pj);
      anchor = mode.field(pi, pj);
    }
    if (anchor < 0.0) mode.field = -mode.field;
  }

  for (std::size_t i = 0; i + 1 < modes.size(); ++i) {
    if (std::abs(modes[i].n_eff - modes[i + 1].n_eff) < 1e-9) {
      modes[i].degenerate_pair = true;
      modes[i + 1].degenerate_pair = true;
    }
  }
  return modes;
}

namespace {

// Symmetric-slab dispersion: u tan u = q w (even), -u cot u = q w (odd) with
// u^2 + w^2 = V^2; q = 1 for TE, (n_core/n_clad)^2 for TM.
std::vector<double> slab_modes(double n_core, double n_clad, double thickness_nm,
                               double lambda_nm, bool tm) {
  if (thickness_nm <= 0.0 || lambda_nm <= 0.0) throw ConfigError("slab: positive lengths required");
  if (n_core <= n_clad) return {};
  const double k = 2.0 * M_PI / lambda_nm;  // rad/nm
  const double half = 0.5 * thickness_nm;
  const double V = k * half * std::sqrt(n_core * n_core - n_clad * n_clad);
  const double q = tm ? (n_core * n_core) / (n_clad * n_clad) : 1.0;

  std::vector<double> out;
  for (int m = 0;; ++m) {
    const double lo = m * M_PI_2 + 1e-12;
    const double hi = std::min((m + 1) * M_PI_2 - 1e-12, V);
    if (lo >= V) break;
    auto f = [&](double u) {
      const double w = std::sqrt(std::max(V * V - u * u, 0.0));
      return (m % 2 == 0) ? u * std::tan(u) - q * w : -u / std::tan(u) - q * w;
    };
    double a = lo, b = hi, fa = f(a), fb = f(b);
    if (fa * fb > 0.0) continue;
    // Bisection until the n_eff bracket is below 1e-10.
    for (int it = 0; it < 200; ++it) {
      const double c = 0.5 * (a + b), fc = f(c);
      if (fa * fc <= 0.0) {
        b = c;
        fb = fc;
      } else {
        a = c;
        fa = fc;
      }
      if (b - a < 1e-14) break;
    }
    const double u = 0.5 * (a + b);
    const double kx = u / half;
    const double ne2 = n_core * n_core - (kx / k) * (kx / k);
    if (ne2 > n_clad * n_clad) out.push_back(std::sqrt(ne2));
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace

std::vector<double> slab_te_modes(double n_core, double n_clad, double thickness_nm,
                                  double lambda_nm) {
  return slab_modes(n_core, n_clad, thickness_nm, lambda_nm, false);
}

std::vector<double> slab_tm_modes(double n_core, double n_clad, double thickness_nm,
                                  double lambda_nm) {
  return slab_modes(n_core, n_clad, thickness_nm, lambda_nm, true);
}

}  // namespace slotkit
