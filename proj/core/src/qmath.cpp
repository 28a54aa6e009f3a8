#include "ewgeom/qmath.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace ewgeom {

namespace {

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Eigen::Index checked_bipartite_side(Eigen::Index dim, Eigen::Index subsystem_dim) {
  if (subsystem_dim < 1 || subsystem_dim * subsystem_dim != dim) {
    throw DimensionError("operator of dimension " + std::to_string(dim) +
                         " is not bipartite with local dimension " + std::to_string(subsystem_dim));
  }
  return subsystem_dim;
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw DimensionError("Hermitian operator must be a non-empty square matrix");
  }
  const Matrix adj = entries_.adjoint();
  const double scale = std::max(1.0, max_abs(entries_));
  if (max_abs(entries_ - adj) > tol::algebra * scale) {
    throw std::invalid_argument("matrix is not Hermitian");
  }
  entries_ = 0.5 * (entries_ + adj);
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
  return HermitianOperator(Matrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::projector(const Vector& ket) {
  return HermitianOperator(ket * ket.adjoint());
}

double HermitianOperator::expectation(const Vector& v) const {
  if (v.size() != dim()) throw DimensionError("vector size does not match operator dimension");
  return v.dot(entries_ * v).real();
}

double HermitianOperator::trace_with(const HermitianOperator& other) const {
  if (other.dim() != dim()) throw DimensionError("trace of operators with different dimensions");
  // Tr(XY) = sum_ij X_ij Y_ji = sum_ij X_ij conj(Y_ij) for Hermitian Y.
  return (entries_.array() * other.entries_.array().conjugate()).sum().real();
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& rhs) {
  if (rhs.dim() != dim()) throw DimensionError("sum of operators with different dimensions");
  entries_ += rhs.entries_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& rhs) {
  if (rhs.dim() != dim()) throw DimensionError("difference of operators with different dimensions");
  entries_ -= rhs.entries_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  entries_ *= s;
  return *this;
}

double HermitianOperator::distance(const HermitianOperator& other) const {
  if (other.dim() != dim()) throw DimensionError("distance between operators with different dimensions");
  return max_abs(entries_ - other.entries_);
}

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  const double norm = amplitudes_.norm();
  if (amplitudes_.size() < 1 || !(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("pure state needs a non-zero, finite amplitude vector");
  }
  amplitudes_ /= norm;

  // First index whose modulus reaches the maximum (ties broken towards the
  // lower index, within round-off).
  const double largest = amplitudes_.cwiseAbs().maxCoeff();
  Eigen::Index pivot = 0;
  while (std::abs(amplitudes_(pivot)) < largest - tol::algebra) ++pivot;
  const cplx phase = amplitudes_(pivot) / std::abs(amplitudes_(pivot));
  amplitudes_ *= std::conj(phase);
  amplitudes_(pivot) = std::abs(amplitudes_(pivot));
}

PureState PureState::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) throw std::out_of_range("basis index out of range");
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

ProductState::ProductState(PureState a, PureState b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.dim() != b_.dim()) throw DimensionError("product state factors must have equal dimension");
}

Vector ProductState::ket() const {
  return Eigen::kroneckerProduct(a_.amplitudes(), b_.amplitudes()).eval();
}

HermitianOperator tensor(const HermitianOperator& x, const HermitianOperator& y) {
  return HermitianOperator(Eigen::kroneckerProduct(x.matrix(), y.matrix()).eval());
}

HermitianOperator partial_transpose(const HermitianOperator& rho, Eigen::Index subsystem_dim) {
  const Eigen::Index d = checked_bipartite_side(rho.dim(), subsystem_dim);
  Matrix out(rho.dim(), rho.dim());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index l = 0; l < d; ++l) out(i * d + l, k * d + j) = rho(i * d + j, k * d + l);
  return HermitianOperator(std::move(out));
}

HermitianOperator swap_operator(Eigen::Index local_dim) {
  if (local_dim < 2) throw std::invalid_argument("swap operator needs local dimension >= 2");
  const Eigen::Index d = local_dim;
  Matrix pi = Matrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) pi(j * d + i, i * d + j) = 1.0;
  return HermitianOperator(std::move(pi));
}

std::vector<HermitianOperator> gell_mann_basis(Eigen::Index n) {
  if (n < 2) throw std::invalid_argument("Gell-Mann basis needs n >= 2");
  std::vector<HermitianOperator> out;
  out.reserve(static_cast<std::size_t>(n * n - 1));
  const cplx i_unit(0.0, 1.0);
  for (Eigen::Index k = 1; k < n; ++k) {
    for (Eigen::Index j = 0; j < k; ++j) {
      Matrix sym = Matrix::Zero(n, n);
      sym(j, k) = sym(k, j) = 1.0;
      out.emplace_back(std::move(sym));

      Matrix anti = Matrix::Zero(n, n);
      anti(j, k) = -i_unit;
      anti(k, j) = i_unit;
      out.emplace_back(std::move(anti));
    }
    Matrix diag = Matrix::Zero(n, n);
    const double kd = static_cast<double>(k);
    const double norm = std::sqrt(2.0 / (kd * (kd + 1.0)));
    for (Eigen::Index l = 0; l < k; ++l) diag(l, l) = norm;
    diag(k, k) = -kd * norm;
    out.emplace_back(std::move(diag));
  }
  return out;
}

double min_eigenvalue(const HermitianOperator& x) {
  return eigenvalues(x).minCoeff();
}

RealVector eigenvalues(const HermitianOperator& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Vector top_eigenvector(const HermitianOperator& x, double* value) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x.matrix());
  const Eigen::Index last = x.dim() - 1;
  if (value != nullptr) *value = solver.eigenvalues()(last);
  return solver.eigenvectors().col(last);
}

GellMannExpansion expand_gell_mann(const HermitianOperator& x) {
  const auto lambdas = gell_mann_basis(x.dim());
  GellMannExpansion e;
  e.identity = x.trace() / static_cast<double>(x.dim());
  e.generators.resize(static_cast<Eigen::Index>(lambdas.size()));
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    e.generators(static_cast<Eigen::Index>(i)) = 0.5 * x.trace_with(lambdas[i]);
  }
  return e;
}

HermitianOperator reconstruct(const GellMannExpansion& expansion) {
  // n^2 - 1 generators
  const auto count = expansion.generators.size();
  const auto n = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(count + 1))));
  if (n * n - 1 != count) throw DimensionError("generator count is not n^2 - 1");
  const auto lambdas = gell_mann_basis(n);
  HermitianOperator out = expansion.identity * HermitianOperator::identity(n);
  for (Eigen::Index i = 0; i < count; ++i) out += expansion.generators(i) * lambdas[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace ewgeom
