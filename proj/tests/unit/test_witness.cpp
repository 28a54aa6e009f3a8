#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include <ewgeom/basis.hpp>
#include <ewgeom/states.hpp>
#include <ewgeom/witness.hpp>

#include "oracles.hpp"

using namespace ewgeom;

namespace {

RealVector v(std::initializer_list<double> x) {
  return Eigen::Map<const RealVector>(x.begin(), static_cast<Eigen::Index>(x.size()));
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Product-state minimum of W with fewer restarts; the validity sweeps call
// it many times.
WitnessCertificate quick_certify(const HermitianOperator& w, const OperatorBasis& b, const DetectionCorpus& corpus) {
  WitnessCheckOptions opts;
  opts.seesaw.restarts = 24;
  return certify_witness(w, b, opts, &corpus);
}

}  // namespace

TEST_CASE("alpha domains") {
  const AlphaDomain rot({{1.0 / 3, 2.0 / 3, true, true}});
  CHECK(rot.contains(1.0 / 3));
  CHECK(rot.contains(2.0 / 3));
  CHECK_FALSE(rot.contains(0.7));
  const auto s = rot.sample(25, 8.0);
  REQUIRE(s.size() == 25);
  CHECK(s.front() == 1.0 / 3);
  CHECK(s.back() == 2.0 / 3);

  const AlphaDomain half_open({{0.25, 1.0 / 3, false, true}});
  CHECK_FALSE(half_open.contains(0.25));
  const auto h = half_open.sample(25, 8.0);
  REQUIRE(h.size() == 25);
  CHECK(h.front() > 0.25);
  CHECK(h.back() == 1.0 / 3);

  const AlphaDomain split({{-kInf, 0.0, false, false}, {0.0, 0.0, true, true}, {1.0, kInf, true, false}});
  CHECK(split.contains(-2.0));
  CHECK(split.contains(0.0));
  CHECK_FALSE(split.contains(0.5));
  CHECK(split.contains(1.0));
  CHECK(split.describe() == "(-inf, 0) U {0} U [1, inf)");
  const auto t = split.sample(25, 8.0);
  REQUIRE(t.size() == 25);
  for (double a : t) CHECK(split.contains(a));
  CHECK(std::count(t.begin(), t.end(), 0.0) == 1);
  CHECK(t.front() == -8.0);

  CHECK_THROWS(AlphaDomain({{1.0, 0.0, true, true}}));
  CHECK_THROWS(AlphaDomain({{1.0, 1.0, true, false}}));
}

TEST_CASE("built-in family coefficients") {
  CHECK_THROWS(builtin_families(5));
  CHECK(builtin_families(3).size() == 3);
  CHECK(builtin_families(4).size() == 4);

  CHECK((find_family("W3").plane(1.0 / 3).coeffs() - v({3, 3, 1})).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((find_family("W3p").plane(1.0 / 3).coeffs() - v({3, 3, 1})).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((find_family("W4").plane(1.0 / 3).coeffs() - v({3, 4, 4, 1.25})).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((find_family("W4pp").plane(0.25).coeffs() - v({4, 4, 4, 1})).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS(find_family("W5"));
}

TEST_CASE("materialized witnesses") {
  const OperatorBasis b3 = build_basis(3);
  const HermitianOperator w23 = find_family("W3").materialize(2.0 / 3, b3);
  const HermitianOperator expect =
      HermitianOperator::identity(9) - 1.5 * b3[0] - 3.0 * b3[1] - 1.5 * b3[2];
  CHECK(w23.distance(expect) < 1e-15);

  CHECK(find_family("W3pp").materialize(0.0, b3).distance(b3[2]) == 0.0);
  const HermitianOperator w3pp = find_family("W3pp").materialize(2.0, b3);
  CHECK(w3pp.distance(HermitianOperator::identity(9) - 3.0 * b3[0] - 3.0 * b3[1] - 0.5 * b3[2]) < 1e-15);

  CHECK_THROWS_AS(find_family("W3").materialize(0.7, b3), std::out_of_range);
  CHECK_THROWS_AS(find_family("W3pp").materialize(0.5, b3), std::out_of_range);
  CHECK_THROWS_AS(find_family("W4").materialize(0.25, build_basis(4)), std::out_of_range);
  CHECK_THROWS_AS(find_family("W4").materialize(0.3, b3), DimensionError);
}

TEST_CASE("swap conjugation exchanges W and W'") {
  const OperatorBasis b3 = build_basis(3);
  const Matrix pi3 = swap_operator(3).matrix();
  for (double a : find_family("W3").samples(10)) {
    const HermitianOperator w = find_family("W3").materialize(a, b3);
    CHECK(HermitianOperator(pi3 * w.matrix() * pi3).distance(find_family("W3p").materialize(a, b3)) <= 1e-12);
  }
  const OperatorBasis b4 = build_basis(4);
  const Matrix pi4 = swap_operator(4).matrix();
  for (double a : find_family("W4").samples(10)) {
    const HermitianOperator w = find_family("W4").materialize(a, b4);
    CHECK(HermitianOperator(pi4 * w.matrix() * pi4).distance(find_family("W4p").materialize(a, b4)) <= 1e-12);
  }
}

TEST_CASE("witness from plane") {
  const OperatorBasis b4 = build_basis(4);
  const HermitianOperator w = witness_from_plane(Hyperplane(v({4, 4, 4, 1}), 1.0), b4);
  CHECK(w.distance(HermitianOperator::identity(16) - 4.0 * (b4[0] + b4[1] + b4[2]) - b4[3]) < 1e-15);
  CHECK(min_eigenvalue(w) >= -1e-12);

  CHECK_THROWS_AS(witness_from_plane(Hyperplane(v({0, 0, 0, -1}), 0.0), b4), std::invalid_argument);
  // Rescaled to offset one first.
  CHECK(witness_from_plane(Hyperplane(v({6, 12, 6}), 2.0), build_basis(3))
            .distance(witness_from_plane(Hyperplane(v({3, 6, 3}), 1.0), build_basis(3))) < 1e-15);

  std::mt19937_64 rng(31);
  for (Eigen::Index n : {3, 4}) {
    const OperatorBasis b = build_basis(n);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    RealVector c(n);
    for (Eigen::Index i = 0; i < n; ++i) c(i) = u(rng);
    const HermitianOperator wc = witness_from_plane(Hyperplane(c, 1.0), b);
    for (int trial = 0; trial < 1000; ++trial) {
      const ProductState s = oracle::random_product(n, rng);
      const double direct = wc.expectation(s.ket());
      CHECK(std::abs(direct - (1.0 - c.dot(oracle::matrix_pvector(s, b)))) <= 1e-12);
    }
  }
}

TEST_CASE("certify_witness") {
  const OperatorBasis b3 = build_basis(3);
  const DetectionCorpus corpus3(b3, 10000, kDefaultSeed);

  const WitnessCertificate best = certify_witness(find_family("W3").materialize(2.0 / 3, b3), b3, {}, &corpus3);
  CHECK(best.min_product_expectation >= -1e-9);
  CHECK(best.detected_state_found);
  CHECK(best.is_witness());
  CHECK(best.detecting_trace < -1e-10);
  REQUIRE(best.detecting_state);
  CHECK(best.detecting_state->trace_with(find_family("W3").materialize(2.0 / 3, b3)) ==
        doctest::Approx(best.detecting_trace).epsilon(1e-12));

  const OperatorBasis b4 = build_basis(4);
  const WitnessCertificate pos = certify_witness(find_family("W4ppp").materialize(1.0, b4), b4, {});
  CHECK(pos.is_positive_operator);
  CHECK_FALSE(pos.detected_state_found);
  CHECK_FALSE(pos.is_witness());

  const WitnessCertificate neg = certify_witness(-HermitianOperator::identity(9), b3, {}, &corpus3);
  CHECK(neg.min_product_expectation == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_FALSE(neg.is_witness());

  CHECK_THROWS_AS(certify_witness(HermitianOperator::identity(16), b3), DimensionError);
}

TEST_CASE("every family stays non-negative on product states") {
  for (Eigen::Index n : {3, 4}) {
    const OperatorBasis b = build_basis(n);
    const DetectionCorpus corpus(b, 0, kDefaultSeed);
    for (const auto& f : builtin_families(n)) {
      for (double a : f.samples(25)) {
        CAPTURE(f.label);
        CAPTURE(a);
        CHECK(quick_certify(f.materialize(a, b), b, corpus).min_product_expectation >= -1e-9);
      }
    }
  }
}

TEST_CASE("positive members") {
  const OperatorBasis b3 = build_basis(3);
  const OperatorBasis b4 = build_basis(4);
  for (double a : {-2.0, -0.5, 1.0, 3.0}) {
    CHECK(min_eigenvalue(find_family("W3pp").materialize(a, b3)) >= -1e-10);
    CHECK(min_eigenvalue(find_family("W4ppp").materialize(a, b4)) >= -1e-10);
  }
  CHECK(min_eigenvalue(find_family("W3").materialize(1.0 / 3, b3)) >= -1e-10);
  CHECK(find_family("W3").materialize(1.0 / 3, b3).distance(find_family("W3p").materialize(1.0 / 3, b3)) == 0.0);
}

TEST_CASE("rotating past the limit breaks the witness") {
  const OperatorBasis b3 = build_basis(3);
  const HermitianOperator w = witness_from_plane(find_family("W3").plane(2.0 / 3 + 0.05), b3);
  WitnessCheckOptions opts;
  opts.random_states = 0;
  CHECK(certify_witness(w, b3, opts).min_product_expectation < -1e-6);
}
