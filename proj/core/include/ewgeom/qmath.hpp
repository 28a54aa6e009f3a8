#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ewgeom {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

namespace tol {
/// Algebraic identities (Hermiticity, orthogonality, reconstruction).
inline constexpr double algebra = 1e-12;
/// Decisions that compare computed numbers against exact rationals.
inline constexpr double decision = 1e-9;
/// Plane certification against the seesaw maximum.
inline constexpr double certify = 1e-6;
/// Positivity of an operator spectrum.
inline constexpr double positivity = 1e-10;
/// Accuracy of tangency thresholds in alpha.
inline constexpr double alpha_threshold = 1e-3;
}  // namespace tol

/// Thrown when an operator or state does not fit the bipartite structure
/// an operation expects.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense Hermitian matrix. The stored entries are exactly Hermitian: the
/// constructor checks the input against its adjoint and then symmetrizes.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(Matrix entries);

  static HermitianOperator identity(Eigen::Index dim);
  static HermitianOperator zero(Eigen::Index dim);
  static HermitianOperator projector(const Vector& ket);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  cplx operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

  double trace() const { return entries_.trace().real(); }
  /// <v|X|v> for a (not necessarily normalized) vector.
  double expectation(const Vector& v) const;
  /// Tr(X Y), real for Hermitian X and Y.
  double trace_with(const HermitianOperator& other) const;

  HermitianOperator& operator+=(const HermitianOperator& rhs);
  HermitianOperator& operator-=(const HermitianOperator& rhs);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator lhs, const HermitianOperator& rhs) { return lhs += rhs; }
  friend HermitianOperator operator-(HermitianOperator lhs, const HermitianOperator& rhs) { return lhs -= rhs; }
  friend HermitianOperator operator*(double s, HermitianOperator x) { return x *= s; }
  friend HermitianOperator operator*(HermitianOperator x, double s) { return x *= s; }
  HermitianOperator operator-() const { return -1.0 * *this; }

  /// Largest elementwise modulus of the difference.
  double distance(const HermitianOperator& other) const;

 private:
  Matrix entries_;
};

/// Normalized ket. Stored in canonical phase: the first component of
/// largest modulus is real and non-negative.
class PureState {
 public:
  PureState() = default;
  /// Normalizes `amplitudes` and fixes the global phase. Throws on a zero
  /// vector.
  explicit PureState(Vector amplitudes);

  static PureState basis(Eigen::Index dim, Eigen::Index index);

  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  cplx operator[](Eigen::Index i) const { return amplitudes_(i); }

 private:
  Vector amplitudes_;
};

class ProductState {
 public:
  ProductState() = default;
  ProductState(PureState a, PureState b);

  const PureState& a() const { return a_; }
  const PureState& b() const { return b_; }
  Eigen::Index local_dim() const { return a_.dim(); }
  /// |a> (x) |b> in the computational basis |i j> -> index i*d + j.
  Vector ket() const;

 private:
  PureState a_;
  PureState b_;
};

HermitianOperator tensor(const HermitianOperator& x, const HermitianOperator& y);

/// Transpose on the second factor of H_A (x) H_B with dim(H_A) == dim(H_B).
HermitianOperator partial_transpose(const HermitianOperator& rho, Eigen::Index subsystem_dim);

/// Pi |i j> = |j i>.
HermitianOperator swap_operator(Eigen::Index local_dim);

/// Generalized Gell-Mann matrices in the standard physics order: for each
/// column k = 1..n-1 the symmetric/antisymmetric pairs (j,k), j < k, followed
/// by the diagonal generator on the first k+1 levels. For n = 3 this gives
/// lambda_3 = diag(1,-1,0) and lambda_8 = diag(1,1,-2)/sqrt(3).
/// Normalization Tr(lambda_i lambda_j) = 2 delta_ij.
std::vector<HermitianOperator> gell_mann_basis(Eigen::Index n);

double min_eigenvalue(const HermitianOperator& x);
RealVector eigenvalues(const HermitianOperator& x);
/// Normalized eigenvector of the largest eigenvalue.
Vector top_eigenvector(const HermitianOperator& x, double* value = nullptr);

/// Expansion X = identity * I + sum_i generators[i] * lambda_i.
struct GellMannExpansion {
  double identity = 0.0;
  RealVector generators;
};

GellMannExpansion expand_gell_mann(const HermitianOperator& x);
HermitianOperator reconstruct(const GellMannExpansion& expansion);

}  // namespace ewgeom
