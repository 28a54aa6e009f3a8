#include "golden.hpp"

#include <cmath>
#include <utility>

namespace ewgeom::cli {

double AlphaCoefficient::at(double alpha) const {
  return std::sqrt(static_cast<double>(root)) * (static_cast<double>(p) * alpha + static_cast<double>(q)) /
         (static_cast<double>(s) * alpha);
}

std::string AlphaCoefficient::str() const {
  std::string numer;
  if (p != 0) numer = std::to_string(p) + "a";
  if (q != 0) numer += (q > 0 && p != 0 ? "+" : "") + std::to_string(q);
  if (numer.empty()) numer = "0";
  std::string out = root == 1 ? "" : "sqrt(" + std::to_string(root) + ")*";
  return out + "(" + numer + ")/(" + std::to_string(s) + "a)";
}

namespace {

// Off-diagonal generator pairs (+lambda_{2m} (x) lambda_{2m}, -lambda_{2m-1} (x) lambda_{2m-1}).
void offdiagonal(std::vector<GoldenTerm>& terms, int n, AlphaCoefficient c) {
  AlphaCoefficient neg = c;
  neg.p = -c.p;
  neg.q = -c.q;
  int idx = 1;
  for (int k = 1; k < n; ++k) {
    for (int j = 0; j < k; ++j) {
      terms.push_back({idx + 1, idx + 1, c});
      terms.push_back({idx, idx, neg});
      idx += 2;
    }
    ++idx;
  }
}

GoldenDecomposition su3_block(bool primed) {
  GoldenDecomposition d{primed ? "W3p" : "W3", {}, 10};
  d.terms.push_back({0, 0, {1, 12, -2, 27}});
  offdiagonal(d.terms, 3, {1, 6, -1, 18});
  d.terms.push_back({3, 3, {1, -3, 5, 36}});
  d.terms.push_back({8, 8, {1, -3, 5, 36}});
  const long sign = primed ? -1 : 1;
  d.terms.push_back({3, 8, {3, sign * 3, -sign, 12}});
  d.terms.push_back({8, 3, {3, -sign * 3, sign, 12}});
  return d;
}

GoldenDecomposition su4_block(bool primed) {
  GoldenDecomposition d{primed ? "W4p" : "W4", {}, 20};
  d.terms.push_back({0, 0, {1, 24, -3, 64}});
  offdiagonal(d.terms, 4, {1, 8, -1, 32});
  d.terms.push_back({3, 3, {1, 0, 3, 32}});
  d.terms.push_back({8, 8, {1, 16, 5, 96}});
  d.terms.push_back({15, 15, {1, 8, 7, 96}});
  if (!primed) {
    d.terms.push_back({3, 8, {3, 4, -1, 16}});
    d.terms.push_back({8, 3, {3, -4, 1, 16}});
    d.terms.push_back({8, 15, {2, 4, -1, 12}});
    d.terms.push_back({15, 8, {2, -4, 1, 12}});
    d.terms.push_back({15, 3, {6, -4, 1, 24}});
  } else {
    d.terms.push_back({8, 3, {3, 12, -3, 48}});
    d.terms.push_back({3, 8, {3, -4, 1, 48}});
    d.terms.push_back({15, 8, {2, 8, -2, 24}});
    d.terms.push_back({8, 15, {2, -4, 1, 24}});
    d.terms.push_back({3, 15, {6, -4, 1, 24}});
  }
  return d;
}

std::vector<Rational> r3(Rational a, Rational b, Rational c) { return {a, b, c}; }

GoldenSection make_s2() {
  GoldenSection s;
  s.vertices = {
      {r3({1, 3}, {0, 1}, {0, 1}), {1, 0, 0}, {0, 1, 0}},
      {r3({0, 1}, {1, 3}, {0, 1}), {1, 0, 0}, {0, 0, 1}},
      {r3({0, 1}, {0, 1}, {1, 3}), {1, 0, 0}, {1, 0, 0}},
      {r3({1, 9}, {1, 9}, {1, 3}), {1, 1, 1}, {1, 1, 1}},
      {r3({1, 48}, {3, 16}, {1, 4}), {0, 3, 1}, {0, 1, 3}},
      {r3({1, 192}, {49, 192}, {7, 48}), {0, 2, 14}, {0, 14, 2}},
      {r3({3, 64}, {25, 192}, {5, 16}), {0, 6, 10}, {0, 10, 6}},
      {r3({1, 12}, {1, 8}, {1, 3}), {}, {}},
      {r3({3, 16}, {1, 48}, {1, 4}), {0, 1, 3}, {0, 3, 1}},
      {r3({49, 192}, {1, 192}, {7, 48}), {0, 14, 2}, {0, 2, 14}},
      {r3({25, 192}, {3, 64}, {5, 16}), {0, 10, 6}, {0, 6, 10}},
      {r3({1, 8}, {1, 12}, {1, 3}), {}, {}},
  };
  s.maxima = {
      {{3, 3, 3}, {5, 3}, r3({1, 9}, {1, 9}, {1, 3})},
      {{3, 3, 1}, {1, 1}, {}},
      {{-3, 3, 3}, {5, 4}, r3({1, 48}, {3, 16}, {1, 4})},
      {{3, 9, 5}, {73, 24}, r3({1, 192}, {49, 192}, {7, 48})},
      {{-3, 3, 6}, {17, 8}, r3({3, 64}, {25, 192}, {5, 16})},
  };
  s.planes = {
      {{3, 3, 1}, 1.0, "exact_boundary"},
      {{3, 3, 3}, 1.0, "intersecting"},
      {{3, 6, 3}, 2.0, "tangent"},
      {{0, 0, -1}, 0.0, "exact_boundary"},
  };
  s.refinements = {
      {{r3({1, 3}, {0, 1}, {0, 1}), r3({0, 1}, {1, 3}, {0, 1}), r3({0, 1}, {0, 1}, {1, 3})}, r3({1, 9}, {1, 9}, {1, 3})},
      {{r3({0, 1}, {1, 3}, {0, 1}), r3({0, 1}, {0, 1}, {1, 3}), r3({1, 9}, {1, 9}, {1, 3})},
       r3({1, 48}, {3, 16}, {1, 4})},
  };
  s.thresholds = {{"W3", 1.0 / 3, 1.0, false, {2, 3}}};
  s.decompositions = {su3_block(false), su3_block(true)};
  s.positive = {{"W3pp", {-2.0, -0.5, 0.0, 1.0, 3.0}}, {"W3", {1.0 / 3}}, {"W3p", {1.0 / 3}}};
  return s;
}

GoldenSection make_s3() {
  GoldenSection s;
  const Rational q{1, 4}, z{0, 1};
  s.maxima = {{{4, 4, 4, 1}, {1, 1}, {}}};
  s.planes = {{{4, 4, 4, 1}, 1.0, "exact_boundary"}, {{0, 0, 0, -1}, 0.0, "exact_boundary"}};
  s.refinements = {{{{q, z, z, z}, {z, q, z, z}, {z, z, q, z}, {z, z, z, q}}, {{1, 16}, {1, 16}, {1, 16}, {1, 4}}}};
  s.thresholds = {{"W4", 0.25, 0.5, true, {1, 3}}, {"W4p", 0.25, 0.5, true, {1, 3}}};
  s.tangent_grids = {{"W4pp", {0.26, 0.5, 1.0, 2.0, 4.0}}};
  s.decompositions = {su4_block(false), su4_block(true)};
  s.positive = {{"W4ppp", {-2.0, -0.5, 0.0, 1.0, 3.0}}};
  return s;
}

}  // namespace

const GoldenSection& golden_s2() {
  static const GoldenSection s = make_s2();
  return s;
}

const GoldenSection& golden_s3() {
  static const GoldenSection s = make_s3();
  return s;
}

void CheckList::near(const std::string& item, double expected, double actual, double tolerance) {
  near(item, std::string{}, expected, actual, tolerance);
}

void CheckList::near(const std::string& item, const Rational& expected, double actual, double tolerance) {
  near(item, expected.str(), expected.value(), actual, tolerance);
}

void CheckList::near(const std::string& item, const std::string& expected_text, double expected, double actual,
                     double tolerance) {
  const double tol = override_.value_or(tolerance);
  const bool pass = std::isfinite(actual) && std::abs(actual - expected) <= tol;
  nlohmann::ordered_json j;
  j["item"] = item;
  if (!expected_text.empty()) j["expected_exact"] = expected_text;
  j["expected"] = expected;
  j["actual"] = actual;
  j["tolerance"] = tol;
  j["pass"] = pass;
  items_.push_back(std::move(j));
  if (!pass) ++failed_;
}

void CheckList::equal(const std::string& item, const std::string& expected, const std::string& actual) {
  const bool pass = expected == actual;
  nlohmann::ordered_json j;
  j["item"] = item;
  j["expected"] = expected;
  j["actual"] = actual;
  j["pass"] = pass;
  items_.push_back(std::move(j));
  if (!pass) ++failed_;
}

}  // namespace ewgeom::cli
