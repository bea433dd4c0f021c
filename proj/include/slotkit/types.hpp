#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace slotkit {

using Real = double;
using Complex = std::complex<double>;

template <class Scalar> using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar> using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar> using ArrayXX = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using MatrixXd = MatrixX<Real>;
using VectorXd = VectorX<Real>;
using ArrayXXd = ArrayXX<Real>;
using Matrix2c = Eigen::Matrix<Complex, 2, 2>;

// Physical constants (SI). Single source for every rate and volume formula.
namespace phys {
inline constexpr double c_m_per_s = 2.99792458e8;
inline constexpr double c_um_per_s = 2.99792458e14;
inline constexpr double hbar_J_s = 1.054571817e-34;
inline constexpr double eps0_F_per_m = 8.8541878128e-12;
}  // namespace phys

// Unit policy: configuration lengths are nm, solver algebra runs in um
// (wavenumbers in rad/um), reported rates in rad/s.
inline constexpr double nm_to_um(double nm) { return nm * 1e-3; }
inline constexpr double um_to_nm(double um) { return um * 1e3; }

// Vacuum wavenumber in rad/um for a wavelength given in nm.
inline double vacuum_wavenumber(double lambda_nm) { return 2.0 * M_PI / nm_to_um(lambda_nm); }

inline constexpr const char* kToolName = "slotkit";
inline constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace slotkit
