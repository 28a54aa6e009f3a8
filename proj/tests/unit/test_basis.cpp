#include <doctest.h>

#include <ewgeom/basis.hpp>

#include "oracles.hpp"

using namespace ewgeom;
using oracle::max_abs;

namespace {

// (1/n) sum over the listed |a b> kets.
Matrix ket_sum(Eigen::Index n, std::initializer_list<std::pair<int, int>> kets) {
  Matrix m = Matrix::Zero(n * n, n * n);
  for (auto [a, b] : kets) m(a * n + b, a * n + b) = 1.0 / static_cast<double>(n);
  return m;
}

}  // namespace

TEST_CASE("shift operator") {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(max_abs(shift_operator(2) - x) == 0.0);

  Vector e0 = Vector::Zero(3);
  e0(0) = 1.0;
  CHECK((shift_operator(3) * e0)(1) == cplx(1.0, 0.0));

  const Matrix s4 = shift_operator(4);
  CHECK(max_abs(s4 * s4 * s4 * s4 - Matrix::Identity(4, 4)) == 0.0);
  CHECK(max_abs(s4 * s4.adjoint() - Matrix::Identity(4, 4)) == 0.0);
  CHECK_THROWS(shift_operator(1));
}

TEST_CASE("explicit kets of the 3x3 and 4x4 bases") {
  const OperatorBasis b3 = build_basis(3);
  CHECK(max_abs(b3[0].matrix() - ket_sum(3, {{0, 1}, {1, 2}, {2, 0}})) < 1e-15);
  CHECK(max_abs(b3[1].matrix() - ket_sum(3, {{0, 2}, {1, 0}, {2, 1}})) < 1e-15);

  const OperatorBasis b4 = build_basis(4);
  CHECK(max_abs(b4[0].matrix() - ket_sum(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})) < 1e-15);
  CHECK(max_abs(b4[1].matrix() - ket_sum(4, {{0, 2}, {1, 3}, {2, 0}, {3, 1}})) < 1e-15);
  CHECK(max_abs(b4[2].matrix() - ket_sum(4, {{0, 3}, {1, 0}, {2, 1}, {3, 2}})) < 1e-15);

  for (Eigen::Index n : {3, 4}) {
    const OperatorBasis b = build_basis(n);
    Matrix psi = Matrix::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) psi(i * n + i, j * n + j) = 1.0 / static_cast<double>(n);
    CHECK(max_abs(b[static_cast<std::size_t>(n - 1)].matrix() - psi) < 1e-15);
  }
}

TEST_CASE("n = 2 basis") {
  const OperatorBasis b = build_basis(2);
  REQUIRE(b.size() == 2);
  CHECK(max_abs(b[0].matrix() - ket_sum(2, {{0, 1}, {1, 0}})) < 1e-15);
  CHECK(max_abs(b[0].matrix() * b[1].matrix()) < 1e-15);
}

TEST_CASE("basis invariants for n = 2..5") {
  for (Eigen::Index n : {2, 3, 4, 5}) {
    const OperatorBasis b = build_basis(n);
    REQUIRE(static_cast<Eigen::Index>(b.size()) == n);
    HermitianOperator sum = HermitianOperator::zero(n * n);
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(b[i].trace() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(min_eigenvalue(b[i]) >= -1e-12);
      for (std::size_t j = 0; j < b.size(); ++j)
        if (i != j) CHECK(max_abs(b[i].matrix() * b[j].matrix()) <= 1e-12);
      sum += b[i];
    }
    const Matrix on = b[b.size() - 1].matrix();
    CHECK(max_abs(on * on - on) < 1e-14);
    CHECK(eigenvalues(b[b.size() - 1]).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    CHECK(min_eigenvalue(HermitianOperator::identity(n * n) - sum) >= -1e-12);
  }
}

TEST_CASE("swap permutes the basis") {
  CHECK(permutation_images(build_basis(2)) == std::vector<std::size_t>{0, 1});
  CHECK(permutation_images(build_basis(3)) == std::vector<std::size_t>{1, 0, 2});
  CHECK(permutation_images(build_basis(4)) == std::vector<std::size_t>{2, 1, 0, 3});

  for (Eigen::Index n : {2, 3, 4, 5}) {
    const OperatorBasis b = build_basis(n);
    const auto img = permutation_images(b);
    const Matrix pi = oracle::kron(Matrix::Identity(1, 1), swap_operator(n).matrix());
    for (std::size_t i = 0; i < b.size(); ++i)
      CHECK(max_abs(pi * b[i].matrix() * pi - b[img[i]].matrix()) < 1e-15);
  }
}

TEST_CASE("combine") {
  const OperatorBasis b = build_basis(3);
  const RealVector c = (RealVector(3) << 1.0, 2.0, 3.0).finished();
  const HermitianOperator x = b.combine(c);
  CHECK(x.distance(b[0] + 2.0 * b[1] + 3.0 * b[2]) < 1e-15);
  CHECK_THROWS_AS(b.combine(RealVector::Ones(4)), DimensionError);
}
