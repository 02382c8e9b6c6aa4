#include "nvmps/tebd.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

namespace nvmps {

namespace {

constexpr std::complex<double> kMinusI{0.0, -1.0};

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

Eigen::MatrixXcd exponentiate_bond(const BondTerm& h, double tau) {
  if (h.matrix.rows() != 9 || h.matrix.cols() != 9) {
    throw ShapeError("bond term must be 9x9");
  }
  if (max_abs(h.matrix - h.matrix.adjoint()) > 1e-10) {
    throw ValidationError("bond term is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition failed for bond " +
                         std::to_string(h.bond_index));
  }
  const Eigen::VectorXcd phases =
      (kMinusI * tau * es.eigenvalues().array()).exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

TrotterGates build_gates(const std::vector<BondTerm>& bonds, double dt) {
  if (bonds.empty()) throw ValidationError("bond list is empty");
  if (!(dt > 0.0)) throw ValidationError("step dt must be positive");
  TrotterGates gates;
  gates.dt = dt;
  for (std::size_t j = 0; j < bonds.size(); ++j) {
    if (j % 2 == 0) {
      gates.odd_half.push_back(exponentiate_bond(bonds[j], 0.5 * dt));
    } else {
      gates.even_full.push_back(exponentiate_bond(bonds[j], dt));
    }
  }
  return gates;
}

void apply_trotter_step(MpsState& psi, const TrotterGates& gates,
                        const SvdTruncation& trunc) {
  const int n_odd = static_cast<int>(gates.odd_half.size());
  const int n_even = static_cast<int>(gates.even_full.size());

  for (int i = 0; i < n_odd; ++i) {
    psi.apply_two_site_gate(gates.odd_half[i], 2 * i, trunc, GateAbsorb::Right);
  }
  for (int i = n_even - 1; i >= 0; --i) {
    psi.apply_two_site_gate(gates.even_full[i], 2 * i + 1, trunc, GateAbsorb::Left);
  }
  for (int i = 0; i < n_odd; ++i) {
    psi.apply_two_site_gate(gates.odd_half[i], 2 * i, trunc, GateAbsorb::Right);
  }
}

void step(MpsState& psi, const NvChainModel& m, StepperKind kind, double t0,
          double dt, const SvdTruncation& trunc) {
  if (psi.n_sites() != m.n_sites) {
    throw ValidationError("state and model chain lengths differ");
  }
  const std::vector<BondTerm> bonds = average_bond_terms(m, kind, t0, dt);
  const TrotterGates gates = build_gates(bonds, dt);
  apply_trotter_step(psi, gates, trunc);
}

EvolveDiagnostics evolve(MpsState& psi, const NvChainModel& m, StepperKind kind,
                         double t_total, int n_steps, const SvdTruncation& trunc,
                         double t_start) {
  if (n_steps < 1) throw ValidationError("n_steps must be at least 1");
  if (!(t_total > 0.0)) throw ValidationError("t_total must be positive");
  if (psi.n_sites() != m.n_sites) {
    throw ValidationError("state and model chain lengths differ");
  }
  m.validate();

  EvolveDiagnostics diag;
  const double weight_before = psi.total_discarded_weight();
  const double dt = t_total / static_cast<double>(n_steps);

  const auto start = std::chrono::steady_clock::now();
  for (int k = 0; k < n_steps; ++k) {
    step(psi, m, kind, t_start + k * dt, dt, trunc);
    diag.max_bond_dimension = std::max(diag.max_bond_dimension, psi.max_bond_dimension());
  }
  const auto stop = std::chrono::steady_clock::now();

  diag.wall_seconds = std::chrono::duration<double>(stop - start).count();
  diag.truncation_weight = psi.total_discarded_weight() - weight_before;
  return diag;
}

}  // namespace nvmps
