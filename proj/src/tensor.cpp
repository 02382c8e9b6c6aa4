#include "nvmps/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

namespace nvmps {

namespace {

std::size_t checked_size(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int e : shape) {
    if (e <= 0) throw ShapeError("tensor extents must be positive");
    n *= static_cast<std::size_t>(e);
  }
  return n;
}

std::string shape_string(const std::vector<int>& shape) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ",";
    os << shape[i];
  }
  os << ")";
  return os.str();
}

void ensure_finite(const DenseTensor& t, const char* op) {
  if (!t.all_finite()) {
    throw NumericalError(std::string(op) + " produced non-finite entries");
  }
}

}  // namespace

DenseTensor::DenseTensor(std::vector<int> shape)
    : shape_(std::move(shape)), data_(checked_size(shape_)) {}

DenseTensor::DenseTensor(std::vector<int> shape, std::vector<Complex> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (checked_size(shape_) != data_.size()) {
    throw ShapeError("data length does not match shape " + shape_string(shape_));
  }
}

DenseTensor DenseTensor::from_matrix(const Eigen::MatrixXcd& m) {
  DenseTensor t({static_cast<int>(m.rows()), static_cast<int>(m.cols())});
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t.data_[i * m.cols() + j] = m(i, j);
  return t;
}

DenseTensor DenseTensor::from_vector(const Eigen::VectorXcd& v) {
  DenseTensor t({static_cast<int>(v.size())});
  for (int i = 0; i < v.size(); ++i) t.data_[i] = v(i);
  return t;
}

Complex& DenseTensor::at(const std::vector<int>& idx) {
  return const_cast<Complex&>(std::as_const(*this).at(idx));
}

const Complex& DenseTensor::at(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != rank()) {
    throw ShapeError("index rank mismatch");
  }
  std::size_t off = 0;
  for (int a = 0; a < rank(); ++a) {
    if (idx[a] < 0 || idx[a] >= shape_[a]) throw ShapeError("index out of range");
    off = off * static_cast<std::size_t>(shape_[a]) + static_cast<std::size_t>(idx[a]);
  }
  return data_[off];
}

DenseTensor DenseTensor::reshaped(std::vector<int> new_shape) const {
  if (checked_size(new_shape) != data_.size()) {
    throw ShapeError("reshape " + shape_string(shape_) + " -> " +
                     shape_string(new_shape) + " changes element count");
  }
  return DenseTensor(std::move(new_shape), data_);
}

DenseTensor DenseTensor::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != rank()) {
    throw ShapeError("permutation rank mismatch");
  }
  std::vector<bool> seen(perm.size(), false);
  for (int p : perm) {
    if (p < 0 || p >= rank() || seen[p]) throw ShapeError("invalid axis permutation");
    seen[p] = true;
  }
  if (std::is_sorted(perm.begin(), perm.end())) return *this;  // identity

  std::vector<int> out_shape(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) out_shape[k] = shape_[perm[k]];

  // input strides, then reordered so stride[k] walks input axis perm[k]
  std::vector<std::size_t> in_stride(shape_.size());
  std::size_t s = 1;
  for (int a = rank() - 1; a >= 0; --a) {
    in_stride[a] = s;
    s *= static_cast<std::size_t>(shape_[a]);
  }
  std::vector<std::size_t> walk(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) walk[k] = in_stride[perm[k]];

  DenseTensor out(out_shape);
  std::vector<int> idx(perm.size(), 0);
  std::size_t in_off = 0;
  for (std::size_t o = 0; o < data_.size(); ++o) {
    out.data_[o] = data_[in_off];
    for (int k = static_cast<int>(perm.size()) - 1; k >= 0; --k) {
      if (++idx[k] < out_shape[k]) {
        in_off += walk[k];
        break;
      }
      idx[k] = 0;
      in_off -= walk[k] * static_cast<std::size_t>(out_shape[k] - 1);
    }
  }
  return out;
}

Eigen::MatrixXcd DenseTensor::as_matrix() const {
  if (rank() != 2) {
    throw ShapeError("as_matrix requires rank 2, got shape " + shape_string(shape_));
  }
  Eigen::MatrixXcd m(shape_[0], shape_[1]);
  for (int i = 0; i < shape_[0]; ++i)
    for (int j = 0; j < shape_[1]; ++j) m(i, j) = data_[i * shape_[1] + j];
  return m;
}

bool DenseTensor::all_finite() const {
  for (const Complex& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<int, int>>& axes) {
  std::vector<bool> a_used(a.rank(), false), b_used(b.rank(), false);
  for (auto [ai, bi] : axes) {
    if (ai < 0 || ai >= a.rank() || bi < 0 || bi >= b.rank()) {
      throw ShapeError("contraction axis out of range");
    }
    if (a_used[ai] || b_used[bi]) throw ShapeError("contraction axis repeated");
    a_used[ai] = true;
    b_used[bi] = true;
    if (a.extent(ai) != b.extent(bi)) {
      throw ShapeError("contraction extent mismatch on axes (" +
                       std::to_string(ai) + "," + std::to_string(bi) + "): " +
                       std::to_string(a.extent(ai)) + " vs " +
                       std::to_string(b.extent(bi)));
    }
  }

  std::vector<int> a_free, b_free, a_perm, b_perm;
  for (int i = 0; i < a.rank(); ++i)
    if (!a_used[i]) {
      a_free.push_back(i);
      a_perm.push_back(i);
    }
  for (auto [ai, bi] : axes) {
    (void)bi;
    a_perm.push_back(ai);
  }
  for (auto [ai, bi] : axes) {
    (void)ai;
    b_perm.push_back(bi);
  }
  for (int i = 0; i < b.rank(); ++i)
    if (!b_used[i]) {
      b_free.push_back(i);
      b_perm.push_back(i);
    }

  std::size_t m = 1, n = 1, k = 1;
  std::vector<int> out_shape;
  for (int i : a_free) {
    m *= static_cast<std::size_t>(a.extent(i));
    out_shape.push_back(a.extent(i));
  }
  for (auto [ai, bi] : axes) {
    (void)bi;
    k *= static_cast<std::size_t>(a.extent(ai));
  }
  for (int i : b_free) {
    n *= static_cast<std::size_t>(b.extent(i));
    out_shape.push_back(b.extent(i));
  }

  const DenseTensor ap = a.permuted(a_perm);
  const DenseTensor bp = b.permuted(b_perm);

  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> ma(ap.data().data(), static_cast<Eigen::Index>(m),
                              static_cast<Eigen::Index>(k));
  Eigen::Map<const RowMat> mb(bp.data().data(), static_cast<Eigen::Index>(k),
                              static_cast<Eigen::Index>(n));

  DenseTensor out(std::move(out_shape));
  Eigen::Map<RowMat> mo(out.data().data(), static_cast<Eigen::Index>(m),
                        static_cast<Eigen::Index>(n));
  mo.noalias() = ma * mb;

  ensure_finite(out, "contract");
  return out;
}

SvdResult svd_truncate(const DenseTensor& m, const SvdTruncation& trunc) {
  if (m.rank() != 2) {
    throw ShapeError("svd_truncate requires a rank-2 tensor, got " +
                     shape_string(m.shape()));
  }
  if (trunc.chi_max < 1) throw ValidationError("chi_max must be positive");
  if (trunc.cutoff < 0) throw ValidationError("cutoff must be non-negative");

  const Eigen::MatrixXcd mat = m.as_matrix();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  if (!s.allFinite() || !svd.matrixU().allFinite() || !svd.matrixV().allFinite()) {
    throw NumericalError("svd did not converge for shape " + shape_string(m.shape()));
  }

  const double total = s.squaredNorm();
  const double s_max = s.size() > 0 ? s(0) : 0.0;
  // noise floor: 1e-14 * s_max is always dropped
  const double threshold = std::max(trunc.cutoff, 1e-14) * s_max;

  int keep = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) >= threshold && s(i) > 0.0) ++keep;
  }
  keep = std::min(keep, trunc.chi_max);
  keep = std::max(keep, 1);
  keep = std::min<int>(keep, static_cast<int>(s.size()));

  double discarded = 0.0;
  for (Eigen::Index i = keep; i < s.size(); ++i) discarded += s(i) * s(i);

  SvdResult r;
  r.u = DenseTensor::from_matrix(svd.matrixU().leftCols(keep));
  r.singular_values = s.head(keep);
  r.v = DenseTensor::from_matrix(svd.matrixV().leftCols(keep).adjoint());
  r.discarded_weight = total > 0.0 ? discarded / total : 0.0;
  ensure_finite(r.u, "svd_truncate");
  ensure_finite(r.v, "svd_truncate");
  return r;
}

}  // namespace nvmps
