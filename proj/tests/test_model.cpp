#include <doctest.h>

#include <cmath>
#include <random>

#include "nvmps/model.hpp"
#include "nvmps/model_config.hpp"
#include "nvmps/oracle.hpp"
#include "test_support.hpp"

using namespace nvmps;
using testsupport::max_abs_diff;
using Complex = std::complex<double>;

TEST_SUITE_BEGIN("model");

namespace {

NvChainModel zero_model(int n) {
  NvChainModel m;
  m.n_sites = n;
  m.d_zfs.assign(n, 0.0);
  m.omega0 = 0.0;
  m.gamma_e = 0.0;
  m.bz.assign(n, 0.0);
  m.g.assign(n - 1, 0.0);
  return m;
}

NvChainModel random_model(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  NvChainModel m = zero_model(n);
  for (double& d : m.d_zfs) d = 500.0 * dist(rng);
  m.omega0 = 400.0 * dist(rng);
  m.gamma_e = -17.6;
  for (double& b : m.bz) b = 50.0 * dist(rng);
  for (double& g : m.g) g = 2.0 * dist(rng);
  m.zeta = dist(rng);
  m.pulse = PulseSpec{2.5 * std::abs(dist(rng)), 20.0 * std::abs(dist(rng)),
                      2.5 * std::abs(dist(rng)), 20.0 * std::abs(dist(rng))};
  return m;
}

Eigen::MatrixXcd embedded_bond_sum(const NvChainModel& m, double t) {
  const long dim = static_cast<long>(std::pow(3.0, m.n_sites) + 0.5);
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
  for (const BondTerm& b : bond_terms_at(m, t)) {
    total += testsupport::embed_gate(b.matrix, b.bond_index, m.n_sites);
  }
  return total;
}

}  // namespace

TEST_CASE("spin-1 operators have the fixed matrix elements") {
  const SpinOps& ops = spin1_ops();
  const double r = 1.0 / std::sqrt(2.0);

  Eigen::Matrix3cd sz_expected;
  sz_expected << 1, 0, 0, 0, 0, 0, 0, 0, -1;
  CHECK(max_abs_diff(ops.sz, sz_expected) == 0.0);

  Eigen::Matrix3cd sx_expected;
  sx_expected << 0, r, 0, r, 0, r, 0, r, 0;
  CHECK(max_abs_diff(ops.sx, sx_expected) == 0.0);

  const Complex i(0.0, 1.0);
  Eigen::Matrix3cd syp_expected;
  syp_expected << 0, -i * r, 0, i * r, 0, i * r, 0, -i * r, 0;
  CHECK(max_abs_diff(ops.sy_prime, syp_expected) == 0.0);

  // the modified y operator flips the lower off-diagonal pair relative to
  // the textbook spin-1 Sy
  CHECK(ops.sy_prime(1, 2) == -ops.sy_canonical(1, 2));
  CHECK(ops.sy_prime(2, 1) == -ops.sy_canonical(2, 1));

  for (const Eigen::Matrix3cd* op :
       {&ops.sz, &ops.sz2, &ops.sx, &ops.sy_prime, &ops.sy_canonical}) {
    CHECK(max_abs_diff(*op, op->adjoint()) <= 1e-15);
  }
}

TEST_CASE("pulse value at t=0 is c2") {
  PulseSpec p{3.1, 17.0, 1.25, 9.0};
  CHECK(pulse_value(p, 0.0) == 1.25);
}

TEST_CASE("pulse value hits the sine peak") {
  PulseSpec p{1.0, 3.14159265358979323846, 0.0, 0.0};
  CHECK(pulse_value(p, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pulse value matches direct scalar evaluation") {
  PulseSpec p{2.0, 3.0, 1.0, 4.0};
  CHECK(pulse_value(p, 0.7) ==
        doctest::Approx(2.0 * std::sin(2.1) + std::cos(2.8)).epsilon(1e-15));
}

TEST_CASE("pulse value is bounded by c1 + c2") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> amp(0.0, 5.0), freq(0.0, 10.0 * M_PI);
  for (int trial = 0; trial < 50; ++trial) {
    PulseSpec p{amp(rng), freq(rng), amp(rng), freq(rng)};
    for (int k = 0; k < 100; ++k) {
      CHECK(std::abs(pulse_value(p, 0.003 * k)) <= p.c1 + p.c2 + 1e-12);
    }
  }
}

TEST_CASE("single-site term vanishes on resonance with no field") {
  NvChainModel m = zero_model(2);
  m.d_zfs.assign(2, 123.4);
  m.omega0 = 123.4;
  CHECK(single_site_term(m, 0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single-site term reproduces the three-site chain detuning") {
  NvChainModel m = zero_model(3);
  m.d_zfs.assign(3, ghz_to_inv_us(2.87));
  m.omega0 = ghz_to_inv_us(2.797);
  Eigen::Matrix3cd h = single_site_term(m, 1);
  const double delta = 73.0;  // (2.87 - 2.797) GHz in 1/us
  CHECK(std::abs(h(0, 0).real() - delta) <= 1e-9 * delta);
  CHECK(std::abs(h(1, 1)) == 0.0);
  CHECK(std::abs(h(2, 2).real() - delta) <= 1e-9 * delta);
  CHECK((h - h.diagonal().asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single-site term applies the Zeeman sign convention") {
  NvChainModel m = zero_model(2);
  // gamma_e * B = +1 means the term is -Sz
  m.gamma_e = 1.0;
  m.bz.assign(2, 1.0);
  Eigen::Matrix3cd h = single_site_term(m, 0);
  CHECK(h(0, 0).real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(h(1, 1)) == 0.0);
  CHECK(h(2, 2).real() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("control term selects sx, sy' or their mix with the drive phase") {
  const SpinOps& ops = spin1_ops();
  NvChainModel m = zero_model(2);

  m.zeta = 0.0;
  CHECK(max_abs_diff(control_site_term(m), 0.5 * ops.sx) == 0.0);

  m.zeta = M_PI / 2.0;
  CHECK(max_abs_diff(control_site_term(m), 0.5 * ops.sy_prime) <= 1e-16);

  m.zeta = M_PI / 4.0;
  Eigen::Matrix3cd mix = (ops.sx + ops.sy_prime) / (2.0 * std::sqrt(2.0));
  CHECK(max_abs_diff(control_site_term(m), mix) <= 1e-16);
  CHECK(max_abs_diff(control_site_term(m), control_site_term(m).adjoint()) <= 1e-16);
}

TEST_CASE("bond term of a fully zero two-site chain is zero") {
  NvChainModel m = zero_model(2);
  m.d_zfs.assign(2, 10.0);
  m.omega0 = 10.0;
  auto bonds = bond_terms_at(m, 0.37);
  REQUIRE(bonds.size() == 1);
  CHECK(bonds[0].matrix.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a pure coupling bond term is the SzSz diagonal") {
  NvChainModel m = zero_model(2);
  m.g = {khz_to_inv_us(100.0)};
  auto bonds = bond_terms_at(m, 0.0);
  REQUIRE(bonds.size() == 1);
  Eigen::VectorXd expected(9);
  expected << 1, 0, -1, 0, 0, 0, -1, 0, 1;
  expected *= 0.1;  // 100 kHz in 1/us
  for (int i = 0; i < 9; ++i) {
    CHECK(bonds[0].matrix(i, i).real() == doctest::Approx(expected(i)).epsilon(1e-14));
  }
  CHECK((bonds[0].matrix - bonds[0].matrix.diagonal().asDiagonal().toDenseMatrix())
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("embedded bond terms sum to the dense Hamiltonian") {
  std::mt19937_64 rng(31);
  for (int n : {2, 3, 4, 6}) {
    NvChainModel m = random_model(n, rng);
    for (double t : {0.0, 0.113, 0.29}) {
      Eigen::MatrixXcd from_bonds = embedded_bond_sum(m, t);
      Eigen::MatrixXcd dense = dense_hamiltonian(m, t);
      const double scale = dense.cwiseAbs().maxCoeff();
      CHECK(max_abs_diff(from_bonds, dense) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("bond terms and their averages stay Hermitian") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    NvChainModel m = random_model(4, rng);
    for (const BondTerm& b : bond_terms_at(m, 0.21)) {
      CHECK(max_abs_diff(b.matrix, b.matrix.adjoint()) <= 1e-12);
    }
    for (StepperKind rule : {StepperKind::Riemann, StepperKind::Simpson}) {
      for (const BondTerm& b : average_bond_terms(m, rule, 0.1, 0.02)) {
        CHECK(max_abs_diff(b.matrix, b.matrix.adjoint()) <= 1e-12);
      }
    }
  }
}

TEST_CASE("averaging rules coincide entrywise for a constant Hamiltonian") {
  std::mt19937_64 rng(41);
  NvChainModel m = random_model(3, rng);
  m.pulse = PulseSpec{};  // u == 0
  auto riem = average_bond_terms(m, StepperKind::Riemann, 0.05, 0.01);
  auto simp = average_bond_terms(m, StepperKind::Simpson, 0.05, 0.01);
  REQUIRE(riem.size() == simp.size());
  for (std::size_t j = 0; j < riem.size(); ++j) {
    CHECK((riem[j].matrix.array() == simp[j].matrix.array()).all());
  }
}

TEST_CASE("averaging rejects non-positive steps") {
  NvChainModel m = zero_model(2);
  CHECK_THROWS_AS(average_bond_terms(m, StepperKind::Simpson, 0.0, 0.0), ValidationError);
  CHECK_THROWS_AS(average_bond_terms(m, StepperKind::Riemann, 0.0, -0.1), ValidationError);
}

TEST_CASE("averaging kernel: linear integrand") {
  Eigen::MatrixXcd probe = Eigen::MatrixXcd::Identity(1, 1);
  auto f = [&](double t) { return Eigen::MatrixXcd(t * probe); };
  CHECK(averaged(StepperKind::Simpson, f, 0.0, 1.0)(0, 0).real() ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(averaged(StepperKind::Riemann, f, 0.0, 1.0)(0, 0).real() == 0.0);
}

TEST_CASE("averaging kernel: quartic integrand misses the mean by 1/120") {
  auto f = [](double t) {
    return Eigen::MatrixXcd(std::pow(t, 4) * Eigen::MatrixXcd::Identity(1, 1));
  };
  const double simpson = averaged(StepperKind::Simpson, f, 0.0, 1.0)(0, 0).real();
  CHECK(simpson == doctest::Approx(5.0 / 24.0).epsilon(1e-15));
  CHECK(std::abs(simpson - 0.2) == doctest::Approx(1.0 / 120.0).epsilon(1e-12));
}

TEST_CASE("simpson averaging is exact for cubic integrands") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXcd a = testsupport::random_hermitian(9, rng);
    Eigen::MatrixXcd b = testsupport::random_hermitian(9, rng);
    const double p0 = coeff(rng), p1 = coeff(rng), p2 = coeff(rng), p3 = coeff(rng);
    auto poly = [&](double t) { return ((p3 * t + p2) * t + p1) * t + p0; };
    auto f = [&](double t) { return Eigen::MatrixXcd(a + poly(t) * b); };

    const double t0 = coeff(rng), dt = 0.5 + std::abs(coeff(rng));
    // closed-form mean of the cubic over [t0, t0+dt]
    auto prim = [&](double t) {
      return p0 * t + p1 * t * t / 2 + p2 * t * t * t / 3 + p3 * t * t * t * t / 4;
    };
    const double mean_poly = (prim(t0 + dt) - prim(t0)) / dt;
    Eigen::MatrixXcd exact = a + mean_poly * b;
    Eigen::MatrixXcd simpson = averaged(StepperKind::Simpson, f, t0, dt);
    const double scale = exact.cwiseAbs().maxCoeff();
    CHECK(max_abs_diff(simpson, exact) <= 1e-12 * scale);
  }
}

TEST_CASE("model validation rejects inconsistent shapes") {
  NvChainModel m = zero_model(3);
  m.g.resize(1);
  CHECK_THROWS_AS(m.validate(), ValidationError);
  m = zero_model(3);
  m.bz.resize(2);
  CHECK_THROWS_AS(m.validate(), ValidationError);
  NvChainModel one;
  one.n_sites = 1;
  CHECK_THROWS_AS(one.validate(), ValidationError);
}

TEST_CASE("chain config parses units and optional fields") {
  const char* text = R"({
    "n_sites": 2,
    "d_zfs_ghz": 2.87,
    "omega0_ghz": 2.75,
    "bz_gauss": [65.0, 20.086],
    "g_khz": 100.0,
    "pulse": {"c1": 1.5, "w1_rad_per_us": 3.0, "c2": 0.25, "w2_rad_per_us": 7.0}
  })";
  ChainConfig cfg = parse_chain_config(text);
  const NvChainModel& m = cfg.model;
  CHECK(m.n_sites == 2);
  CHECK(m.d_zfs[0] == doctest::Approx(2870.0).epsilon(1e-15));
  CHECK(m.omega0 == doctest::Approx(2750.0).epsilon(1e-15));
  CHECK(m.gamma_e == doctest::Approx(-2.8025).epsilon(1e-12));
  CHECK(m.bz[1] == 20.086);
  CHECK(m.g[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(m.zeta == 0.0);
  CHECK(m.pulse.c1 == 1.5);
  CHECK(m.pulse.w2 == 7.0);
  REQUIRE(cfg.pulse.has_value());
  CHECK(cfg.pulse->c2 == 0.25);
  CHECK(!cfg.initial_kets);
}

TEST_CASE("chain config parses initial kets and rejects bad input") {
  const char* text = R"({
    "n_sites": 2, "d_zfs_ghz": 2.87, "omega0_ghz": 2.87,
    "bz_gauss": 0.0, "g_khz": 0.0,
    "initial_local_kets": [[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]]
  })";
  ChainConfig cfg = parse_chain_config(text);
  REQUIRE(cfg.initial_kets.has_value());
  REQUIRE(cfg.initial_kets->size() == 1);
  CHECK((*cfg.initial_kets)[0](0) == Complex(1.0, 0.0));
  CHECK(!cfg.pulse.has_value());

  CHECK_THROWS_AS(parse_chain_config("{"), ValidationError);
  CHECK_THROWS_AS(parse_chain_config(R"({"n_sites": 2})"), ValidationError);
  CHECK_THROWS_AS(
      parse_chain_config(
          R"({"n_sites": 2, "d_zfs_ghz": [1.0, 2.0, 3.0], "omega0_ghz": 1.0,
              "bz_gauss": 0.0, "g_khz": 0.0})"),
      ValidationError);
}

TEST_SUITE_END();
