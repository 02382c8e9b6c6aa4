#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nvmps/errors.hpp"
#include "nvmps/quadrature.hpp"

namespace nvmps {

// Unit conventions, used throughout the library:
//   - time in microseconds (us)
//   - Hamiltonian coefficients as frequencies in 1/us (i.e. the plain MHz
//     figure: a coefficient quoted as 100 kHz enters as 0.1, and over
//     t = 1 us it advances the phase by 0.1 rad)
//   - magnetic fields in Gauss
// The 2*pi of angular-frequency conventions is deliberately not applied;
// all presets, configs, benchmarks and tolerances assume plain frequency
// units. Conversion helpers below take the units the chain parameters are
// usually quoted in (GHz, kHz, GHz/T) and produce 1/us or 1/(us*Gauss).
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

constexpr double ghz_to_inv_us(double f_ghz) { return 1.0e3 * f_ghz; }
constexpr double mhz_to_inv_us(double f_mhz) { return f_mhz; }
constexpr double khz_to_inv_us(double f_khz) { return 1.0e-3 * f_khz; }
// 1 GHz/T = 0.1 MHz/Gauss
constexpr double ghz_per_tesla_to_inv_us_gauss(double g) { return 0.1 * g; }

// electron gyromagnetic ratio of the NV ground-state spin, GHz/T
inline constexpr double kNvGammaEGhzPerTesla = -28.025;

// Spin-1 operators in the basis (|m=+1>, |m=0>, |m=-1>).
//
// sy_prime is the modified y operator used by the chain's control term; it
// differs from the textbook spin-1 Sy in the sign of the lower off-diagonal
// pair, and sy_canonical is kept alongside for sensitivity checks.
struct SpinOps {
  Eigen::Matrix3cd sz;
  Eigen::Matrix3cd sz2;
  Eigen::Matrix3cd sx;
  Eigen::Matrix3cd sy_prime;
  Eigen::Matrix3cd sy_canonical;
  Eigen::Matrix3cd id;
};

const SpinOps& spin1_ops();

// Control envelope u(t) = c1 * sin(w1 * t) + c2 * cos(w2 * t).
// Amplitudes are Rabi amplitudes in 1/us; frequencies in rad/us (they sit
// inside the trigonometric arguments).
struct PulseSpec {
  double c1 = 0.0;
  double w1 = 0.0;
  double c2 = 0.0;
  double w2 = 0.0;
};

double pulse_value(const PulseSpec& p, double t);

// Driven chain of spin-1 sites with nearest-neighbor SzSz coupling, in the
// frame rotating at the drive carrier:
//
//   H(t)      = H_drift + u(t) * H_control
//   H_drift   = sum_j [ (D_j - omega0) Sz_j^2 - gamma_e B_j Sz_j ]
//               + sum_j g_j Sz_j Sz_{j+1}
//   H_control = (1/2) sum_j [ cos(zeta) Sx_j + sin(zeta) Sy'_j ]
//
// Sites and bonds are 0-based; bond j couples sites (j, j+1).
struct NvChainModel {
  int n_sites = 0;
  std::vector<double> d_zfs;  // zero-field splitting D, 1/us, per site
  double omega0 = 0.0;        // drive carrier, 1/us
  double gamma_e = 0.0;       // 1/(us*Gauss); negative for the NV electron
  std::vector<double> bz;     // bias field, Gauss, per site
  std::vector<double> g;      // coupling, 1/us, per bond
  double zeta = 0.0;          // drive phase, rad
  PulseSpec pulse;
  bool use_canonical_sy = false;  // swap sy_prime for the textbook Sy

  void validate() const;  // ValidationError on inconsistent sizes / non-finite values
};

// (D_j - omega0) Sz^2 - gamma_e B_j Sz for 0-based site j, in 1/us.
Eigen::Matrix3cd single_site_term(const NvChainModel& m, int site);

// Dimensionless per-site control template (1/2)(cos(zeta) Sx + sin(zeta) Sy');
// scaled by u(t) when the Hamiltonian is assembled.
Eigen::Matrix3cd control_site_term(const NvChainModel& m);

// Hermitian two-site operator attached to a bond.
struct BondTerm {
  int bond_index = 0;      // 0-based; couples sites (bond_index, bond_index + 1)
  Eigen::MatrixXcd matrix; // 9x9, site bond_index is the slower tensor factor
};

// Nearest-neighbor bond decomposition of H(t): bond j carries the full
// interaction g_j Sz Sz plus each touching site's single-site and control
// terms divided by the number of bonds touching that site (1 at the chain
// ends, 2 in the interior). Summing the embedded bond terms over the chain
// reproduces H(t) exactly.
std::vector<BondTerm> bond_terms_at(const NvChainModel& m, double t);

// Rule-averaged bond terms over the step [t0, t0 + dt]; see StepperKind.
// The Simpson rule evaluates the bond list at three time points and
// combines bondwise, so the cost is three Hamiltonian evaluations per step.
// When the three pulse samples are identical the combination is skipped and
// the averages of both rules coincide exactly.
std::vector<BondTerm> average_bond_terms(const NvChainModel& m, StepperKind rule,
                                         double t0, double dt);

}  // namespace nvmps
