#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "nvmps/errors.hpp"
#include "nvmps/model.hpp"

namespace nvmps {

using SparseXcd = Eigen::SparseMatrix<std::complex<double>>;

// Tolerances for the adaptive reference integrator.
struct OdeTolerances {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::optional<double> max_step;  // us
};

// Full 3^N x 3^N Hamiltonian at time t, assembled directly from the chain
// definition (single-site, interaction and control terms embedded on the
// product space). Independent of the bond decomposition; the two assemblies
// cross-check each other. Basis ordering is site-major with site 0 as the
// most significant trit and local order (|m=+1>, |m=0>, |m=-1>).
Eigen::MatrixXcd dense_hamiltonian(const NvChainModel& m, double t, int site_cap = 12);

// Sparse drift / control factors with the same basis ordering, built once
// per solve so the right-hand side only rescales the control part by u(t).
SparseXcd sparse_drift(const NvChainModel& m, int site_cap = 12);
SparseXcd sparse_control(const NvChainModel& m, int site_cap = 12);

// Reference solution of i d/dt psi = (drift + u(t) * control) psi over
// [t0, t1] with an embedded Dormand-Prince 5(4) pair. Throws
// IntegrationError on step-size underflow.
Eigen::VectorXcd sesolve_generic(const SparseXcd& drift, const SparseXcd& control,
                                 const PulseSpec& pulse, Eigen::VectorXcd psi,
                                 double t0, double t1, const OdeTolerances& tol = {});

// Dense state-vector evolution of the chain over [0, t_total].
Eigen::VectorXcd sesolve(const NvChainModel& m, const Eigen::VectorXcd& psi0,
                         double t_total, const OdeTolerances& tol = {},
                         int site_cap = 12);

// As sesolve, but returns the state at each requested time (ascending,
// within [0, t_total]); used for per-step error traces.
std::vector<Eigen::VectorXcd> sesolve_sampled(const NvChainModel& m,
                                              const Eigen::VectorXcd& psi0,
                                              std::span<const double> times,
                                              const OdeTolerances& tol = {},
                                              int site_cap = 12);

// Fixed-step classical RK4 integration of the same equation; cross-check
// for the adaptive solver. dt is snapped so the span divides evenly.
Eigen::VectorXcd sesolve_rk4(const NvChainModel& m, const Eigen::VectorXcd& psi0,
                             double t_total, double dt, int site_cap = 12);

// max_i |a_i - b_i|; no global-phase alignment is applied.
double holder_inf_error(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

}  // namespace nvmps
