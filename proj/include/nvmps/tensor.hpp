#pragma once

#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nvmps/errors.hpp"

namespace nvmps {

using Complex = std::complex<double>;

// Dense complex tensor with an explicit shape.
//
// Memory layout is row-major: the LAST index varies fastest. A tensor with
// shape (a, b, c) stores element (i, j, k) at linear offset (i*b + j)*c + k.
// This convention is fixed so that reshapes are pure reinterpretations and
// serialized test vectors are reproducible across implementations.
class DenseTensor {
 public:
  DenseTensor() = default;

  // Zero-filled tensor of the given shape. Extents must be positive.
  explicit DenseTensor(std::vector<int> shape);

  DenseTensor(std::vector<int> shape, std::vector<Complex> data);

  static DenseTensor from_matrix(const Eigen::MatrixXcd& m);
  static DenseTensor from_vector(const Eigen::VectorXcd& v);

  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  int extent(int axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  Complex& at(const std::vector<int>& idx);
  const Complex& at(const std::vector<int>& idx) const;

  // Same data, new shape; total element count must be unchanged.
  DenseTensor reshaped(std::vector<int> new_shape) const;

  // Generic axis permutation: result axis k is input axis perm[k].
  DenseTensor permuted(const std::vector<int>& perm) const;

  // Rank-2 tensor as an Eigen matrix (and back via from_matrix).
  Eigen::MatrixXcd as_matrix() const;

  bool all_finite() const;

 private:
  std::vector<int> shape_;
  std::vector<Complex> data_;
};

// Pairwise tensor contraction. `axes` pairs an axis of `a` with an axis of
// `b`; paired extents must agree. The result carries the unpaired axes of
// `a` followed by the unpaired axes of `b`, each in original order.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<int, int>>& axes);

// Truncation policy for singular value decompositions.
//
// Singular values are discarded when they fall below cutoff * s_max
// (relative cutoff, so truncation is invariant under rescaling of the
// input), and the retained count is capped at chi_max. Values below
// 1e-14 * s_max are always discarded; they are double-precision noise and
// would otherwise inflate bond dimensions with meaningless directions.
struct SvdTruncation {
  int chi_max = std::numeric_limits<int>::max();
  double cutoff = 0.0;
};

struct SvdResult {
  DenseTensor u;                    // columns orthonormal
  Eigen::VectorXd singular_values;  // non-negative, non-increasing
  DenseTensor v;                    // rows orthonormal; input ~ u * diag(s) * v
  double discarded_weight = 0.0;    // sum of discarded s^2 over sum of all s^2
};

// Truncated SVD of a rank-2 tensor. At least one singular value is always
// retained. discarded_weight is relative and lies in [0, 1].
SvdResult svd_truncate(const DenseTensor& m, const SvdTruncation& trunc);

}  // namespace nvmps
