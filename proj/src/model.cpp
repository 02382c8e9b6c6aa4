#include "nvmps/model.hpp"

#include <cmath>

namespace nvmps {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

SpinOps make_spin1_ops() {
  const double r = 1.0 / std::sqrt(2.0);
  SpinOps ops;
  ops.sz << 1, 0, 0, 0, 0, 0, 0, 0, -1;
  ops.sz2 = ops.sz * ops.sz;
  ops.sx << 0, r, 0, r, 0, r, 0, r, 0;
  ops.sy_prime << 0, -kI * r, 0, kI * r, 0, kI * r, 0, -kI * r, 0;
  ops.sy_canonical << 0, -kI * r, 0, kI * r, 0, -kI * r, 0, kI * r, 0;
  ops.id = Eigen::Matrix3cd::Identity();
  return ops;
}

Eigen::MatrixXcd kron3(const Eigen::Matrix3cd& a, const Eigen::Matrix3cd& b) {
  Eigen::MatrixXcd out(9, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  return out;
}

// bond terms for a fixed value of the control envelope
std::vector<BondTerm> bond_terms_with_u(const NvChainModel& m, double u) {
  const SpinOps& ops = spin1_ops();
  const Eigen::Matrix3cd control = control_site_term(m);
  const int n = m.n_sites;

  std::vector<BondTerm> bonds;
  bonds.reserve(n - 1);
  for (int j = 0; j < n - 1; ++j) {
    const double w_left = (j == 0) ? 1.0 : 2.0;
    const double w_right = (j + 1 == n - 1) ? 1.0 : 2.0;
    const Eigen::Matrix3cd left = (single_site_term(m, j) + u * control) / w_left;
    const Eigen::Matrix3cd right = (single_site_term(m, j + 1) + u * control) / w_right;
    Eigen::MatrixXcd h = m.g[j] * kron3(ops.sz, ops.sz);
    h += kron3(left, ops.id);
    h += kron3(ops.id, right);
    bonds.push_back(BondTerm{j, std::move(h)});
  }
  return bonds;
}

}  // namespace

const SpinOps& spin1_ops() {
  static const SpinOps ops = make_spin1_ops();
  return ops;
}

std::string_view to_string(StepperKind kind) {
  return kind == StepperKind::Riemann ? "riemann" : "simpson";
}

StepperKind stepper_kind_from(std::string_view name) {
  if (name == "riemann") return StepperKind::Riemann;
  if (name == "simpson") return StepperKind::Simpson;
  throw ValidationError("unknown stepper kind: " + std::string(name));
}

Eigen::MatrixXcd averaged(StepperKind rule,
                          const std::function<Eigen::MatrixXcd(double)>& f,
                          double t0, double dt) {
  if (!(dt > 0.0)) throw ValidationError("averaging step dt must be positive");
  if (rule == StepperKind::Riemann) return f(t0);
  return (f(t0) + 4.0 * f(t0 + 0.5 * dt) + f(t0 + dt)) / 6.0;
}

double pulse_value(const PulseSpec& p, double t) {
  return p.c1 * std::sin(p.w1 * t) + p.c2 * std::cos(p.w2 * t);
}

void NvChainModel::validate() const {
  if (n_sites < 2) throw ValidationError("chain needs at least two sites");
  const std::size_t n = static_cast<std::size_t>(n_sites);
  if (d_zfs.size() != n) throw ValidationError("d_zfs must have one entry per site");
  if (bz.size() != n) throw ValidationError("bz must have one entry per site");
  if (g.size() != n - 1) throw ValidationError("g must have one entry per bond");
  auto finite = [](double x) { return std::isfinite(x); };
  bool ok = finite(omega0) && finite(gamma_e) && finite(zeta) && finite(pulse.c1) &&
            finite(pulse.w1) && finite(pulse.c2) && finite(pulse.w2);
  for (double x : d_zfs) ok = ok && finite(x);
  for (double x : bz) ok = ok && finite(x);
  for (double x : g) ok = ok && finite(x);
  if (!ok) throw ValidationError("model parameters must be finite");
}

Eigen::Matrix3cd single_site_term(const NvChainModel& m, int site) {
  if (site < 0 || site >= m.n_sites) throw ValidationError("site index out of range");
  const SpinOps& ops = spin1_ops();
  const double delta = m.d_zfs.at(site) - m.omega0;
  const double zeeman = -m.gamma_e * m.bz.at(site);
  return delta * ops.sz2 + zeeman * ops.sz;
}

Eigen::Matrix3cd control_site_term(const NvChainModel& m) {
  const SpinOps& ops = spin1_ops();
  const Eigen::Matrix3cd& sy = m.use_canonical_sy ? ops.sy_canonical : ops.sy_prime;
  return 0.5 * (std::cos(m.zeta) * ops.sx + std::sin(m.zeta) * sy);
}

std::vector<BondTerm> bond_terms_at(const NvChainModel& m, double t) {
  m.validate();
  return bond_terms_with_u(m, pulse_value(m.pulse, t));
}

std::vector<BondTerm> average_bond_terms(const NvChainModel& m, StepperKind rule,
                                         double t0, double dt) {
  if (!(dt > 0.0)) throw ValidationError("averaging step dt must be positive");
  m.validate();
  const double u0 = pulse_value(m.pulse, t0);
  if (rule == StepperKind::Riemann) return bond_terms_with_u(m, u0);

  const double um = pulse_value(m.pulse, t0 + 0.5 * dt);
  const double u1 = pulse_value(m.pulse, t0 + dt);
  if (u0 == um && um == u1) return bond_terms_with_u(m, u0);  // constant integrand

  std::vector<BondTerm> a = bond_terms_with_u(m, u0);
  const std::vector<BondTerm> b = bond_terms_with_u(m, um);
  const std::vector<BondTerm> c = bond_terms_with_u(m, u1);
  for (std::size_t j = 0; j < a.size(); ++j) {
    a[j].matrix = (a[j].matrix + 4.0 * b[j].matrix + c[j].matrix) / 6.0;
  }
  return a;
}

}  // namespace nvmps
