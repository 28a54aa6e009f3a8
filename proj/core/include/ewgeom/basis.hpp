#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ewgeom/qmath.hpp"

namespace ewgeom {

/// Cyclic shift S|i> = |i+1 mod n>. Unitary, real, not Hermitian, so it is
/// returned as a plain matrix.
Matrix shift_operator(Eigen::Index n);

/// The mutually orthogonal family O_1..O_n on C^n (x) C^n:
///   O_k = (1/n) sum_i |i, i+k><i, i+k|  for k = 1..n-1,
///   O_n = |psi><psi|,  |psi> = (1/sqrt n) sum_i |i i>.
/// Index k-1 holds O_k.
class OperatorBasis {
 public:
  Eigen::Index local_dim() const { return local_dim_; }
  std::size_t size() const { return ops_.size(); }
  const HermitianOperator& operator[](std::size_t i) const { return ops_[i]; }
  const std::vector<HermitianOperator>& ops() const { return ops_; }
  /// The maximally entangled ket |psi>.
  const Vector& psi() const { return psi_; }

  /// sum_i c_i O_i
  HermitianOperator combine(std::span<const double> coeffs) const;
  HermitianOperator combine(const RealVector& coeffs) const;

 private:
  friend OperatorBasis build_basis(Eigen::Index n);
  Eigen::Index local_dim_ = 0;
  std::vector<HermitianOperator> ops_;
  Vector psi_;
};

OperatorBasis build_basis(Eigen::Index n);

/// image[i] = j such that Pi O_{i+1} Pi = O_{j+1} (0-based indices).
/// Throws std::logic_error if some conjugate is not a member of the basis.
std::vector<std::size_t> permutation_images(const OperatorBasis& basis);

}  // namespace ewgeom
