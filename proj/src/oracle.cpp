#include "nvmps/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace nvmps {

namespace {

constexpr std::complex<double> kMinusI{0.0, -1.0};

long pow3(int n) {
  long d = 1;
  for (int i = 0; i < n; ++i) d *= 3;
  return d;
}

void check_cap(const NvChainModel& m, int site_cap) {
  if (m.n_sites > site_cap) {
    throw CapacityError("dense representation capped at " + std::to_string(site_cap) +
                        " sites, requested " + std::to_string(m.n_sites));
  }
}

Eigen::MatrixXcd kron_dense(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// single 3x3 operator embedded at `site` on the n-site product space
Eigen::MatrixXcd embed_site(const Eigen::Matrix3cd& op, int site, int n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int j = 0; j < n; ++j) {
    out = kron_dense(out, j == site ? Eigen::MatrixXcd(op)
                                    : Eigen::MatrixXcd(Eigen::Matrix3cd::Identity()));
  }
  return out;
}

// 3x3 operators a at `site` and b at `site + 1`
Eigen::MatrixXcd embed_pair(const Eigen::Matrix3cd& a, const Eigen::Matrix3cd& b,
                            int site, int n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXcd f;
    if (j == site) f = a;
    else if (j == site + 1) f = b;
    else f = Eigen::Matrix3cd::Identity();
    out = kron_dense(out, f);
  }
  return out;
}

// sparse embedding of a 3x3 operator at one site: for each nonzero (p, q) of
// the local operator, couples basis states that differ only in that trit
void add_site_triplets(std::vector<Eigen::Triplet<std::complex<double>>>& trips,
                       const Eigen::Matrix3cd& op, int site, int n) {
  const long dim = pow3(n);
  const long right = pow3(n - 1 - site);  // stride of this site's trit
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      const std::complex<double> v = op(p, q);
      if (v == std::complex<double>(0.0, 0.0)) continue;
      for (long base = 0; base < dim / 3; ++base) {
        const long outer = (base / right) * (3 * right);
        const long inner = base % right;
        trips.emplace_back(outer + p * right + inner, outer + q * right + inner, v);
      }
    }
  }
}

struct SchrodingerRhs {
  const SparseXcd& drift;
  const SparseXcd& control;
  const PulseSpec& pulse;

  void operator()(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt) const {
    dydt.noalias() = drift * y;
    if (control.nonZeros() > 0) {
      dydt.noalias() += pulse_value(pulse, t) * (control * y);
    }
    dydt *= kMinusI;
  }
};

// Dormand-Prince 5(4) coefficients.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// difference between the 5th- and 4th-order solutions
constexpr double kE[7] = {71.0 / 57600,    0.0,          -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

double error_norm(const Eigen::VectorXcd& err, const Eigen::VectorXcd& y0,
                  const Eigen::VectorXcd& y1, double abs_tol, double rel_tol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale =
        abs_tol + rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double r = std::abs(err(i)) / scale;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

double initial_step(const SchrodingerRhs& rhs, double t0, const Eigen::VectorXcd& y0,
                    const Eigen::VectorXcd& f0, double span, double abs_tol,
                    double rel_tol) {
  // standard two-trial heuristic: start from the RHS magnitude, refine with
  // one Euler probe of the second derivative
  auto scaled_norm = [&](const Eigen::VectorXcd& v, const Eigen::VectorXcd& ref) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double scale = abs_tol + rel_tol * std::abs(ref(i));
      const double r = std::abs(v(i)) / scale;
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(v.size()));
  };
  const double d0 = scaled_norm(y0, y0);
  const double d1 = scaled_norm(f0, y0);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);

  Eigen::VectorXcd y1 = y0 + h0 * f0;
  Eigen::VectorXcd f1(y0.size());
  rhs(t0 + h0, y1, f1);
  const double d2 = scaled_norm(f1 - f0, y0) / h0;
  double h1;
  if (std::max(d1, d2) <= 1e-15) {
    h1 = std::max(1e-6, h0 * 1e-3);
  } else {
    h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / 5.0);
  }
  return std::min({100.0 * h0, h1, span});
}

Eigen::VectorXcd integrate_dopri5(const SchrodingerRhs& rhs, Eigen::VectorXcd y,
                                  double t0, double t1, const OdeTolerances& tol) {
  if (!(tol.abs_tol > 0.0) || !(tol.rel_tol > 0.0)) {
    throw ValidationError("ode tolerances must be positive");
  }
  const double span = t1 - t0;
  if (span == 0.0) return y;
  if (span < 0.0) throw ValidationError("integration interval is reversed");

  const Eigen::Index n = y.size();
  std::array<Eigen::VectorXcd, 7> k;
  for (auto& v : k) v.resize(n);
  Eigen::VectorXcd y_stage(n), y_next(n), err(n);

  double t = t0;
  rhs(t, y, k[0]);
  double h = initial_step(rhs, t0, y, k[0], span, tol.abs_tol, tol.rel_tol);
  if (tol.max_step) h = std::min(h, *tol.max_step);

  const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() *
                         std::max({std::abs(t0), std::abs(t1), 1e-3});
  bool rejected = false;

  while (t < t1) {
    const double remaining = t1 - t;
    if (remaining <= h_floor) break;  // within rounding of the endpoint
    h = std::min(h, remaining);
    if (h < h_floor) {
      throw IntegrationError(
          "ode step size underflow (h=" + std::to_string(h) + ") at t=" +
              std::to_string(t) + " us",
          t);
    }

    for (int s = 1; s < 7; ++s) {
      y_stage = y;
      for (int j = 0; j < s; ++j) {
        if (kA[s][j] != 0.0) y_stage += (h * kA[s][j]) * k[j];
      }
      rhs(t + kC[s] * h, y_stage, k[s]);
    }
    // stage 7 is evaluated at the 5th-order solution (FSAL)
    y_next = y_stage;
    err.setZero();
    for (int s = 0; s < 7; ++s) {
      if (kE[s] != 0.0) err += (h * kE[s]) * k[s];
    }

    const double e = error_norm(err, y, y_next, tol.abs_tol, tol.rel_tol);
    if (e <= 1.0) {
      t += h;
      y.swap(y_next);
      k[0].swap(k[6]);  // FSAL
      const double grow = rejected ? 1.0 : 5.0;
      double fac = 0.9 * std::pow(std::max(e, 1e-10), -0.2);
      h *= std::clamp(fac, 0.2, grow);
      if (tol.max_step) h = std::min(h, *tol.max_step);
      rejected = false;
    } else {
      double fac = 0.9 * std::pow(e, -0.2);
      h *= std::clamp(fac, 0.2, 1.0);
      rejected = true;
    }
  }
  return y;
}

}  // namespace

Eigen::MatrixXcd dense_hamiltonian(const NvChainModel& m, double t, int site_cap) {
  m.validate();
  check_cap(m, site_cap);
  const SpinOps& ops = spin1_ops();
  const int n = m.n_sites;
  const long dim = pow3(n);
  const double u = pulse_value(m.pulse, t);
  const Eigen::Matrix3cd control = control_site_term(m);

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 0; j < n; ++j) {
    h += embed_site(single_site_term(m, j) + u * control, j, n);
  }
  for (int j = 0; j < n - 1; ++j) {
    h += m.g[j] * embed_pair(ops.sz, ops.sz, j, n);
  }
  return h;
}

SparseXcd sparse_drift(const NvChainModel& m, int site_cap) {
  m.validate();
  check_cap(m, site_cap);
  const int n = m.n_sites;
  const long dim = pow3(n);

  // the drift (single-site + interaction) is diagonal in the Sz product basis
  Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(dim);
  std::vector<int> mval(n);
  for (long idx = 0; idx < dim; ++idx) {
    double e = 0.0;
    long rest = idx;
    for (int j = n - 1; j >= 0; --j) {
      const int trit = static_cast<int>(rest % 3);  // 0 -> m=+1, 1 -> m=0, 2 -> m=-1
      mval[j] = 1 - trit;
      rest /= 3;
    }
    for (int j = 0; j < n; ++j) {
      const double mj = mval[j];
      e += (m.d_zfs[j] - m.omega0) * mj * mj - m.gamma_e * m.bz[j] * mj;
    }
    for (int j = 0; j < n - 1; ++j) {
      e += m.g[j] * mval[j] * mval[j + 1];
    }
    diag(idx) = e;
  }
  SparseXcd out(dim, dim);
  std::vector<Eigen::Triplet<std::complex<double>>> trips;
  trips.reserve(dim);
  for (long i = 0; i < dim; ++i) trips.emplace_back(i, i, diag(i));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseXcd sparse_control(const NvChainModel& m, int site_cap) {
  m.validate();
  check_cap(m, site_cap);
  const int n = m.n_sites;
  const long dim = pow3(n);
  const Eigen::Matrix3cd control = control_site_term(m);

  std::vector<Eigen::Triplet<std::complex<double>>> trips;
  for (int j = 0; j < n; ++j) add_site_triplets(trips, control, j, n);
  SparseXcd out(dim, dim);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Eigen::VectorXcd sesolve_generic(const SparseXcd& drift, const SparseXcd& control,
                                 const PulseSpec& pulse, Eigen::VectorXcd psi,
                                 double t0, double t1, const OdeTolerances& tol) {
  if (drift.rows() != drift.cols() || control.rows() != control.cols() ||
      drift.rows() != psi.size() ||
      (control.nonZeros() > 0 && control.rows() != psi.size())) {
    throw ShapeError("sesolve operator/state dimension mismatch");
  }
  SchrodingerRhs rhs{drift, control, pulse};
  return integrate_dopri5(rhs, std::move(psi), t0, t1, tol);
}

Eigen::VectorXcd sesolve(const NvChainModel& m, const Eigen::VectorXcd& psi0,
                         double t_total, const OdeTolerances& tol, int site_cap) {
  check_cap(m, site_cap);
  if (psi0.size() != pow3(m.n_sites)) {
    throw ShapeError("initial state length does not match the chain size");
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-12) {
    throw ValidationError("initial state must be normalized");
  }
  const SparseXcd drift = sparse_drift(m, site_cap);
  const SparseXcd control = sparse_control(m, site_cap);
  return sesolve_generic(drift, control, m.pulse, psi0, 0.0, t_total, tol);
}

std::vector<Eigen::VectorXcd> sesolve_sampled(const NvChainModel& m,
                                              const Eigen::VectorXcd& psi0,
                                              std::span<const double> times,
                                              const OdeTolerances& tol, int site_cap) {
  check_cap(m, site_cap);
  if (std::abs(psi0.norm() - 1.0) > 1e-12) {
    throw ValidationError("initial state must be normalized");
  }
  const SparseXcd drift = sparse_drift(m, site_cap);
  const SparseXcd control = sparse_control(m, site_cap);

  std::vector<Eigen::VectorXcd> out;
  out.reserve(times.size());
  Eigen::VectorXcd psi = psi0;
  double t = 0.0;
  for (double target : times) {
    if (target < t) throw ValidationError("sample times must be ascending");
    psi = sesolve_generic(drift, control, m.pulse, std::move(psi), t, target, tol);
    t = target;
    out.push_back(psi);
  }
  return out;
}

Eigen::VectorXcd sesolve_rk4(const NvChainModel& m, const Eigen::VectorXcd& psi0,
                             double t_total, double dt, int site_cap) {
  check_cap(m, site_cap);
  if (!(dt > 0.0)) throw ValidationError("rk4 step must be positive");
  const SparseXcd drift = sparse_drift(m, site_cap);
  const SparseXcd control = sparse_control(m, site_cap);
  SchrodingerRhs rhs{drift, control, m.pulse};

  const long n_steps = std::max<long>(1, std::lround(t_total / dt));
  const double h = t_total / static_cast<double>(n_steps);

  Eigen::VectorXcd y = psi0;
  const Eigen::Index n = y.size();
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), tmp(n);
  double t = 0.0;
  for (long s = 0; s < n_steps; ++s) {
    rhs(t, y, k1);
    tmp = y + (0.5 * h) * k1;
    rhs(t + 0.5 * h, tmp, k2);
    tmp = y + (0.5 * h) * k2;
    rhs(t + 0.5 * h, tmp, k3);
    tmp = y + h * k3;
    rhs(t + h, tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return y;
}

double holder_inf_error(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) {
    throw ValidationError("holder_inf_error requires equal-length vectors");
  }
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a(i) - b(i)));
  }
  return m;
}

}  // namespace nvmps
