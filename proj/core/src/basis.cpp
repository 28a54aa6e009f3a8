#include "ewgeom/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace ewgeom {

Matrix shift_operator(Eigen::Index n) {
  if (n < 2) throw std::invalid_argument("shift operator needs n >= 2");
  Matrix s = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) s((i + 1) % n, i) = 1.0;
  return s;
}

OperatorBasis build_basis(Eigen::Index n) {
  if (n < 2) throw std::invalid_argument("operator basis needs n >= 2");
  const Matrix shift = shift_operator(n);
  const Matrix id = Matrix::Identity(n, n);

  OperatorBasis basis;
  basis.local_dim_ = n;
  basis.ops_.reserve(static_cast<std::size_t>(n));

  // (I (x) S^k) |ii>
  Matrix shift_k = id;
  for (Eigen::Index k = 1; k < n; ++k) {
    shift_k = shift * shift_k;
    const Matrix lift = Eigen::kroneckerProduct(id, shift_k).eval();
    Matrix acc = Matrix::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Vector ii = Vector::Zero(n * n);
      ii(i * n + i) = 1.0;
      const Vector shifted = lift * ii;
      acc += shifted * shifted.adjoint();
    }
    basis.ops_.emplace_back(acc / static_cast<double>(n));
  }

  basis.psi_ = Vector::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) basis.psi_(i * n + i) = 1.0 / std::sqrt(static_cast<double>(n));
  basis.ops_.push_back(HermitianOperator::projector(basis.psi_));
  return basis;
}

HermitianOperator OperatorBasis::combine(std::span<const double> coeffs) const {
  if (coeffs.size() != ops_.size()) {
    throw DimensionError("expected " + std::to_string(ops_.size()) + " coefficients, got " +
                         std::to_string(coeffs.size()));
  }
  HermitianOperator out = HermitianOperator::zero(local_dim_ * local_dim_);
  for (std::size_t i = 0; i < ops_.size(); ++i) out += coeffs[i] * ops_[i];
  return out;
}

HermitianOperator OperatorBasis::combine(const RealVector& coeffs) const {
  return combine(std::span<const double>(coeffs.data(), static_cast<std::size_t>(coeffs.size())));
}

std::vector<std::size_t> permutation_images(const OperatorBasis& basis) {
  const Matrix pi = swap_operator(basis.local_dim()).matrix();
  std::vector<std::size_t> images;
  images.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const HermitianOperator conj(pi * basis[i].matrix() * pi);
    std::size_t found = basis.size();
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (conj.distance(basis[j]) <= tol::algebra) {
        found = j;
        break;
      }
    }
    if (found == basis.size()) {
      throw std::logic_error("swap conjugate of O_" + std::to_string(i + 1) + " is not in the basis");
    }
    images.push_back(found);
  }
  return images;
}

}  // namespace ewgeom
