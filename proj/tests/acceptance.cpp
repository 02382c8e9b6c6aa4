// Acceptance suite: end-to-end checks of the headline behaviors, one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nvmps/bench.hpp"
#include "nvmps/oracle.hpp"
#include "test_support.hpp"

using namespace nvmps;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& details) {
  std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              details.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

MpsState all_m0(int n) {
  return MpsState::from_product_state(
      std::vector<Eigen::Vector3cd>(n, Eigen::Vector3cd(0.0, 1.0, 0.0)));
}

const SvdTruncation kUnbounded{};  // no bond cap, no cutoff

// ---------------------------------------------------------------------------
// 1. convergence orders on the two-site chain
// ---------------------------------------------------------------------------
void criterion_convergence_orders() {
  BenchConfig cfg;
  cfg.preset = "nv2";
  cfg.seed = 0;
  cfg.n_pulses = 10;
  cfg.ns_list = {50, 100, 200, 400, 800};
  cfg.chi_max = std::numeric_limits<int>::max();
  auto slopes = fit_convergence_order(run_error_vs_steps(cfg));
  const double r = slopes.at(StepperKind::Riemann);
  const double s = slopes.at(StepperKind::Simpson);
  const bool pass = r >= -1.3 && r <= -0.7 && s >= -2.4 && s <= -1.6;
  std::ostringstream d;
  d << "riemann slope " << r << " (want [-1.3,-0.7]), simpson slope " << s
    << " (want [-2.4,-1.6])";
  report(1, "convergence orders, two-site chain", pass, d.str());
}

// ---------------------------------------------------------------------------
// 2. error-ratio magnitude on the three-site chain
// ---------------------------------------------------------------------------
void criterion_error_ratio_nv3() {
  BenchConfig cfg;
  cfg.preset = "nv3";
  cfg.seed = 0;
  cfg.n_pulses = 10;
  cfg.ns_list = {1000};
  cfg.chi_max = 3;
  auto ratios = error_ratios(run_error_vs_steps(cfg));
  const double ratio = ratios.at({3, 1000});
  std::ostringstream d;
  d << "mean riemann / mean simpson = " << ratio << " (want >= 100)";
  report(2, "error ratio, three-site chain at 1000 steps", ratio >= 100.0, d.str());
}

// ---------------------------------------------------------------------------
// 3. size sweep: ratio floor and runtime ceiling
// ---------------------------------------------------------------------------
void criterion_size_sweep() {
  BenchConfig cfg;
  cfg.preset = "nvN";
  cfg.seed = 0;
  cfg.n_pulses = 10;
  cfg.ns_list = {1000};
  cfg.n_list = {2, 3, 4, 5, 6};
  cfg.chi_max = 16;
  auto records = run_error_vs_size(cfg);
  auto ratios = error_ratios(records);

  bool ratios_ok = true;
  std::ostringstream d;
  d << "ratios:";
  for (int n : cfg.n_list) {
    const double ratio = ratios.at({n, 1000});
    d << " N=" << n << ":" << static_cast<int>(ratio);
    ratios_ok = ratios_ok && ratio >= 10.0;
  }

  double rt_r = 0.0, rt_s = 0.0;
  for (const BenchRecord& r : records) {
    (r.stepper == StepperKind::Riemann ? rt_r : rt_s) += r.runtime_s;
  }
  const double rt_ratio = rt_s / rt_r;
  d << " (want all >= 10); simpson/riemann runtime " << rt_ratio << " (want <= 3.5)";
  report(3, "size sweep ratios and runtime", ratios_ok && rt_ratio <= 3.5, d.str());
}

// ---------------------------------------------------------------------------
// 4. constant-Hamiltonian degeneracy, bit for bit
// ---------------------------------------------------------------------------
void criterion_constant_degeneracy() {
  NvChainModel m = preset_model("nv3", 3);
  m.pulse = PulseSpec{};  // u == 0

  MpsState riem = all_m0(3);
  MpsState simp = all_m0(3);
  const SvdTruncation trunc{3, 0.0};
  evolve(riem, m, StepperKind::Riemann, 0.3, 200, trunc);
  evolve(simp, m, StepperKind::Simpson, 0.3, 200, trunc);

  bool identical = riem.n_sites() == simp.n_sites();
  for (int j = 0; identical && j < riem.n_sites(); ++j) {
    identical = riem.site_tensor(j).shape() == simp.site_tensor(j).shape() &&
                riem.site_tensor(j).data() == simp.site_tensor(j).data();
  }
  report(4, "constant-Hamiltonian degeneracy (exact equality)", identical,
         identical ? "final tensors bit-identical over 200 steps"
                   : "final tensors differ");
}

// ---------------------------------------------------------------------------
// 5. oracle fidelity and self-consistency
// ---------------------------------------------------------------------------
void criterion_oracle_fidelity() {
  NvChainModel m = preset_model("nv2", 2);
  m.pulse = generate_pulses(0, 1)[0];
  const Eigen::VectorXcd psi0 = all_m0(2).to_dense();

  const Eigen::VectorXcd reference = sesolve(m, psi0, 0.3);
  MpsState psi = all_m0(2);
  evolve(psi, m, StepperKind::Simpson, 0.3, 4000, kUnbounded);
  const double err = holder_inf_error(psi.to_dense(), reference);

  const Eigen::VectorXcd rk4 = sesolve_rk4(m, psi0, 0.3, 1e-5);
  const double self = holder_inf_error(reference, rk4);

  std::ostringstream d;
  d << "simpson@4000 error " << err << " (want <= 1e-6); adaptive-vs-rk4 " << self
    << " (want <= 1e-8)";
  report(5, "oracle fidelity", err <= 1e-6 && self <= 1e-8, d.str());
}

// ---------------------------------------------------------------------------
// 6. quadrature exactness for cubic drive polynomials
// ---------------------------------------------------------------------------
void criterion_quadrature_exactness() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  int good = 0;
  double worst = 0.0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const Eigen::MatrixXcd a = testsupport::random_hermitian(9, rng);
    const Eigen::MatrixXcd b = testsupport::random_hermitian(9, rng);
    const double p0 = coeff(rng), p1 = coeff(rng), p2 = coeff(rng), p3 = coeff(rng);
    auto f = [&](double t) {
      return Eigen::MatrixXcd(a + (((p3 * t + p2) * t + p1) * t + p0) * b);
    };
    const double t0 = coeff(rng);
    const double dt = 0.1 + std::abs(coeff(rng));
    auto prim = [&](double t) {
      return p0 * t + p1 * t * t / 2 + p2 * t * t * t / 3 + p3 * t * t * t * t / 4;
    };
    const Eigen::MatrixXcd exact = a + ((prim(t0 + dt) - prim(t0)) / dt) * b;
    const Eigen::MatrixXcd simpson = averaged(StepperKind::Simpson, f, t0, dt);
    const double rel = (simpson - exact).cwiseAbs().maxCoeff() /
                       exact.cwiseAbs().maxCoeff();
    worst = std::max(worst, rel);
    if (rel <= 1e-12) ++good;
  }
  std::ostringstream d;
  d << good << "/" << trials << " instances within 1e-12 (worst relative "
    << worst << ")";
  report(6, "simpson exactness on cubic pulses", good == trials, d.str());
}

// ---------------------------------------------------------------------------
// 7. structural invariants
// ---------------------------------------------------------------------------
void criterion_structural() {
  std::ostringstream d;
  bool pass = true;

  {  // gate unitarity across averaged bond terms of a driven chain
    NvChainModel m = preset_model("nv3", 3);
    m.pulse = generate_pulses(7, 1)[0];
    double worst = 0.0;
    for (double t0 : {0.0, 0.11, 0.29}) {
      TrotterGates gates = build_gates(
          average_bond_terms(m, StepperKind::Simpson, t0, 3e-4), 3e-4);
      for (const auto& g : gates.odd_half) {
        worst = std::max(worst, (g.adjoint() * g - Eigen::MatrixXcd::Identity(9, 9))
                                    .cwiseAbs()
                                    .maxCoeff());
      }
      for (const auto& g : gates.even_full) {
        worst = std::max(worst, (g.adjoint() * g - Eigen::MatrixXcd::Identity(9, 9))
                                    .cwiseAbs()
                                    .maxCoeff());
      }
    }
    pass = pass && worst <= 1e-12;
    d << "gate unitarity " << worst << " (<= 1e-12)";
  }

  {  // norm conservation over 1000 unitary steps
    NvChainModel m = preset_model("nv3", 3);
    m.pulse = generate_pulses(0, 1)[0];
    MpsState psi = all_m0(3);
    evolve(psi, m, StepperKind::Simpson, 0.3, 1000, kUnbounded);
    const double dev = std::abs(psi.norm() - 1.0);
    pass = pass && dev <= 1e-9;
    d << "; norm deviation over 1000 steps " << dev << " (<= 1e-9)";
  }

  {  // bond embedding completeness against the dense assembly, N <= 6
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n) {
      NvChainModel m = preset_model("nvN", n);
      m.pulse = generate_pulses(11, 1)[0];
      for (double t : {0.0, 0.2}) {
        const Eigen::MatrixXcd dense = dense_hamiltonian(m, t);
        Eigen::MatrixXcd from_bonds =
            Eigen::MatrixXcd::Zero(dense.rows(), dense.cols());
        for (const BondTerm& b : bond_terms_at(m, t)) {
          from_bonds += testsupport::embed_gate(b.matrix, b.bond_index, n);
        }
        worst = std::max(worst, (from_bonds - dense).cwiseAbs().maxCoeff() /
                                    dense.cwiseAbs().maxCoeff());
      }
    }
    pass = pass && worst <= 1e-12;
    d << "; embedding completeness " << worst << " (<= 1e-12 relative)";
  }

  {  // csv byte-reproducibility for a fixed seed, runtime column aside
    BenchConfig cfg;
    cfg.preset = "nv2";
    cfg.seed = 42;
    cfg.n_pulses = 2;
    cfg.ns_list = {50, 100};
    auto mask = [](const std::vector<BenchRecord>& records) {
      std::ostringstream os;
      emit_csv(records, os);
      std::istringstream in(os.str());
      std::ostringstream out;
      std::string line;
      bool header = true;
      while (std::getline(in, line)) {
        if (!header) {
          // runtime_s is the sixth comma-separated field
          std::size_t start = 0;
          for (int k = 0; k < 5; ++k) start = line.find(',', start) + 1;
          const std::size_t end = line.find(',', start);
          line = line.substr(0, start) + "-" + line.substr(end);
        }
        header = false;
        out << line << '\n';
      }
      return out.str();
    };
    const bool same = mask(run_error_vs_steps(cfg)) == mask(run_error_vs_steps(cfg));
    pass = pass && same;
    d << "; csv reproducibility " << (same ? "byte-identical" : "mismatch");
  }

  report(7, "structural invariants", pass, d.str());
}

}  // namespace

int main() {
  std::printf("acceptance suite: driven spin-1 chain MPS evolution\n");
  criterion_convergence_orders();
  criterion_error_ratio_nv3();
  criterion_size_sweep();
  criterion_constant_degeneracy();
  criterion_oracle_fidelity();
  criterion_quadrature_exactness();
  criterion_structural();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
