#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nvmps/tensor.hpp"

namespace nvmps {

// Which side of the split absorbs the singular values after a two-site
// gate. Absorbing toward the side of the next gate keeps canonical-center
// movement cheap during sweeps.
enum class GateAbsorb { Left, Right };

// Matrix product state of a spin-1 chain.
//
// Site tensors are rank-3 with index order (left bond, physical, right
// bond); the physical extent is 3 everywhere and the outermost bonds have
// extent 1. Densification (to_dense) orders basis states site-major with
// site 0 as the most significant trit, matching the row-major tensor
// layout; local basis order is (|m=+1>, |m=0>, |m=-1>).
//
// When canonical_center() == k, every tensor left of k is left-orthonormal
// and every tensor right of k is right-orthonormal. Truncations accumulate
// their relative discarded weights in total_discarded_weight(); the sum is
// a diagnostic error proxy, not a rigorous bound (no compounding
// corrections are applied).
//
// MpsState is a value type: copy freely, mutate only under exclusive
// access. Independent states may evolve concurrently.
class MpsState {
 public:
  // Product state from per-site kets, each normalized to 1e-12.
  static MpsState from_product_state(const std::vector<Eigen::Vector3cd>& kets);

  int n_sites() const { return static_cast<int>(tensors_.size()); }
  const DenseTensor& site_tensor(int site) const { return tensors_.at(site); }

  // extent of the bond between sites (bond, bond + 1); 0-based
  int bond_dimension(int bond) const;
  int max_bond_dimension() const;

  std::optional<int> canonical_center() const { return center_; }
  double total_discarded_weight() const { return discarded_; }

  // Move the canonical center to `center`, orthonormalizing all other
  // sites. QR-based, so the represented state is unchanged.
  void canonicalize(int center);

  // Apply a 9x9 gate to sites (left_site, left_site + 1), truncating the
  // new bond per `trunc`. The center is moved to the pair first if needed
  // and ends at left_site + 1 (Right absorb) or left_site (Left absorb).
  // Returns the relative discarded weight of this application, which is
  // also added to total_discarded_weight().
  double apply_two_site_gate(const Eigen::MatrixXcd& gate, int left_site,
                             const SvdTruncation& trunc,
                             GateAbsorb absorb = GateAbsorb::Right);

  // Full 3^N state vector; refuses chains longer than site_cap.
  Eigen::VectorXcd to_dense(int site_cap = 12) const;

  double norm() const;

 private:
  MpsState() = default;
  void move_center_right();
  void move_center_left();

  std::vector<DenseTensor> tensors_;
  std::optional<int> center_;
  double discarded_ = 0.0;
};

// <a|b> contracted over the whole chain; equals the dense inner product.
std::complex<double> overlap(const MpsState& a, const MpsState& b);

}  // namespace nvmps
