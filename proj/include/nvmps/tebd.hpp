#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nvmps/model.hpp"
#include "nvmps/mps.hpp"

namespace nvmps {

// Gate set for one second-order Trotter step of duration dt. Bonds at even
// 0-based positions (the first, third, ... bond of the chain) form the
// outer layers and carry half-step gates; bonds at odd positions form the
// middle layer and carry full-step gates:
//
//   U_step = [odd half] * [even full] * [odd half]
//
// For a single-bond chain the step collapses to the exact bond exponential.
struct TrotterGates {
  std::vector<Eigen::MatrixXcd> odd_half;   // gate i acts on bond 2*i
  std::vector<Eigen::MatrixXcd> even_full;  // gate i acts on bond 2*i + 1
  double dt = 0.0;
};

// exp(-i * h * tau) via Hermitian eigendecomposition. The input must be
// Hermitian to 1e-10 in max-entry norm.
Eigen::MatrixXcd exponentiate_bond(const BondTerm& h, double tau);

TrotterGates build_gates(const std::vector<BondTerm>& bonds, double dt);

// One sweep of the three gate layers, alternating direction per layer so
// the canonical center travels O(N) per layer.
void apply_trotter_step(MpsState& psi, const TrotterGates& gates,
                        const SvdTruncation& trunc);

// One step of the time-dependent evolution over [t0, t0 + dt]: averages the
// bond terms with the chosen rule, builds the Trotter gates from the
// averaged terms (computed once and shared by all gates of the step), and
// applies them.
void step(MpsState& psi, const NvChainModel& m, StepperKind kind, double t0,
          double dt, const SvdTruncation& trunc);

struct EvolveDiagnostics {
  double truncation_weight = 0.0;  // discarded weight accumulated by this call
  double wall_seconds = 0.0;       // wall-clock time of the stepping loop
  int max_bond_dimension = 1;
};

// n_steps uniform steps of dt = t_total / n_steps starting at t_start, step
// k spanning [t_start + k*dt, t_start + (k+1)*dt]. Deterministic for fixed
// inputs; single-threaded.
EvolveDiagnostics evolve(MpsState& psi, const NvChainModel& m, StepperKind kind,
                         double t_total, int n_steps, const SvdTruncation& trunc,
                         double t_start = 0.0);

}  // namespace nvmps
