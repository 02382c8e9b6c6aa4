#include "nvmps/mps.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

namespace nvmps {

namespace {

Eigen::MatrixXcd tensor_as_matrix(const DenseTensor& t, int rows, int cols) {
  return t.reshaped({rows, cols}).as_matrix();
}

}  // namespace

MpsState MpsState::from_product_state(const std::vector<Eigen::Vector3cd>& kets) {
  if (kets.empty()) throw ValidationError("product state needs at least one site");
  MpsState psi;
  psi.tensors_.reserve(kets.size());
  for (const auto& ket : kets) {
    if (std::abs(ket.norm() - 1.0) > 1e-12) {
      throw ValidationError("local kets must be normalized to 1e-12");
    }
    DenseTensor t({1, 3, 1});
    for (int p = 0; p < 3; ++p) t.data()[p] = ket(p);
    psi.tensors_.push_back(std::move(t));
  }
  // every unit-norm (1,3,1) tensor is already an isometry from both sides
  psi.center_ = 0;
  return psi;
}

int MpsState::bond_dimension(int bond) const {
  if (bond < 0 || bond >= n_sites() - 1) throw ValidationError("bond index out of range");
  return tensors_[bond].extent(2);
}

int MpsState::max_bond_dimension() const {
  int chi = 1;
  for (const auto& t : tensors_) chi = std::max(chi, t.extent(2));
  return chi;
}

void MpsState::move_center_right() {
  const int c = *center_;
  const DenseTensor& a = tensors_[c];
  const int l = a.extent(0), r = a.extent(2);

  Eigen::MatrixXcd m = tensor_as_matrix(a, l * 3, r);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  const int k = static_cast<int>(std::min(m.rows(), m.cols()));
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(l * 3, k);
  Eigen::MatrixXcd rm = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  tensors_[c] = DenseTensor::from_matrix(q).reshaped({l, 3, k});

  const DenseTensor& b = tensors_[c + 1];
  const int br = b.extent(2);
  Eigen::MatrixXcd bm = tensor_as_matrix(b, r, 3 * br);
  tensors_[c + 1] = DenseTensor::from_matrix(rm * bm).reshaped({k, 3, br});
  center_ = c + 1;
}

void MpsState::move_center_left() {
  const int c = *center_;
  const DenseTensor& a = tensors_[c];
  const int l = a.extent(0), r = a.extent(2);

  Eigen::MatrixXcd m = tensor_as_matrix(a, l, 3 * r);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m.adjoint());
  const int k = static_cast<int>(std::min(m.rows(), m.cols()));
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(3 * r, k);
  Eigen::MatrixXcd rm = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  tensors_[c] = DenseTensor::from_matrix(q.adjoint()).reshaped({k, 3, r});

  const DenseTensor& b = tensors_[c - 1];
  const int bl = b.extent(0);
  Eigen::MatrixXcd bm = tensor_as_matrix(b, bl * 3, l);
  tensors_[c - 1] = DenseTensor::from_matrix(bm * rm.adjoint()).reshaped({bl, 3, k});
  center_ = c - 1;
}

void MpsState::canonicalize(int center) {
  if (center < 0 || center >= n_sites()) {
    throw ValidationError("canonical center out of range");
  }
  if (!center_) {
    // no gauge yet: sweep the center to the last site, then walk back
    center_ = 0;
    while (*center_ < n_sites() - 1) move_center_right();
  }
  while (*center_ < center) move_center_right();
  while (*center_ > center) move_center_left();
}

double MpsState::apply_two_site_gate(const Eigen::MatrixXcd& gate, int left_site,
                                     const SvdTruncation& trunc, GateAbsorb absorb) {
  if (gate.rows() != 9 || gate.cols() != 9) {
    throw ShapeError("two-site gate must be 9x9");
  }
  if (left_site < 0 || left_site >= n_sites() - 1) {
    throw ValidationError("gate site out of range");
  }
  if (!center_ || *center_ < left_site || *center_ > left_site + 1) {
    canonicalize(absorb == GateAbsorb::Right ? left_site : left_site + 1);
  }

  const DenseTensor& a = tensors_[left_site];
  const DenseTensor& b = tensors_[left_site + 1];
  const int l = a.extent(0), r = b.extent(2);

  // theta = (l, p1, p2, r), then gate contracted over (p1, p2)
  DenseTensor theta = contract(a, b, {{2, 0}});
  DenseTensor gate4 = DenseTensor::from_matrix(gate).reshaped({3, 3, 3, 3});
  theta = contract(gate4, theta, {{2, 1}, {3, 2}});  // (p1', p2', l, r)
  theta = theta.permuted({2, 0, 1, 3});              // (l, p1', p2', r)

  SvdResult svd = svd_truncate(theta.reshaped({l * 3, 3 * r}), trunc);
  const int k = static_cast<int>(svd.singular_values.size());

  if (absorb == GateAbsorb::Right) {
    tensors_[left_site] = svd.u.reshaped({l, 3, k});
    Eigen::MatrixXcd sv = svd.singular_values.asDiagonal() * svd.v.as_matrix();
    tensors_[left_site + 1] = DenseTensor::from_matrix(sv).reshaped({k, 3, r});
    center_ = left_site + 1;
  } else {
    Eigen::MatrixXcd us = svd.u.as_matrix() * svd.singular_values.asDiagonal();
    tensors_[left_site] = DenseTensor::from_matrix(us).reshaped({l, 3, k});
    tensors_[left_site + 1] = svd.v.reshaped({k, 3, r});
    center_ = left_site;
  }

  discarded_ += svd.discarded_weight;
  return svd.discarded_weight;
}

Eigen::VectorXcd MpsState::to_dense(int site_cap) const {
  const int n = n_sites();
  if (n > site_cap) {
    throw CapacityError("dense state capped at " + std::to_string(site_cap) +
                        " sites, chain has " + std::to_string(n));
  }
  // accumulate left to right; v rows run over the 3^j prefix configurations
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Ones(1, 1);
  for (int j = 0; j < n; ++j) {
    const DenseTensor& t = tensors_[j];
    const int l = t.extent(0), r = t.extent(2);
    const Eigen::MatrixXcd site = tensor_as_matrix(t, l, 3 * r);
    const Eigen::MatrixXcd next = v * site;  // column index is (p, r'), p slower
    Eigen::MatrixXcd out(v.rows() * 3, r);
    for (Eigen::Index x = 0; x < v.rows(); ++x)
      for (int p = 0; p < 3; ++p) out.row(x * 3 + p) = next.row(x).segment(p * r, r);
    v = std::move(out);
  }
  return Eigen::VectorXcd(v.col(0));
}

double MpsState::norm() const { return std::sqrt(std::abs(overlap(*this, *this))); }

std::complex<double> overlap(const MpsState& a, const MpsState& b) {
  if (a.n_sites() != b.n_sites()) {
    throw ValidationError("overlap requires equal chain lengths");
  }
  // transfer contraction: env(i, j) = sum over left part of conj(a) x b
  Eigen::MatrixXcd env = Eigen::MatrixXcd::Ones(1, 1);
  for (int s = 0; s < a.n_sites(); ++s) {
    const DenseTensor& ta = a.site_tensor(s);
    const DenseTensor& tb = b.site_tensor(s);
    const int la = ta.extent(0), ra = ta.extent(2);
    const int lb = tb.extent(0), rb = tb.extent(2);
    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(ra, rb);
    for (int p = 0; p < 3; ++p) {
      Eigen::MatrixXcd ap(la, ra), bp(lb, rb);
      for (int i = 0; i < la; ++i)
        for (int k = 0; k < ra; ++k) ap(i, k) = ta.data()[(i * 3 + p) * ra + k];
      for (int i = 0; i < lb; ++i)
        for (int k = 0; k < rb; ++k) bp(i, k) = tb.data()[(i * 3 + p) * rb + k];
      next.noalias() += ap.adjoint() * env * bp;
    }
    env = std::move(next);
  }
  return env(0, 0);
}

}  // namespace nvmps
