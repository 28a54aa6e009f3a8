#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ewgeom::cli {

struct Rational {
  long num = 0;
  long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
};

/// sqrt(root) * (p alpha + q) / (s alpha)
struct AlphaCoefficient {
  long root = 1;
  long p = 0;
  long q = 0;
  long s = 1;

  double at(double alpha) const;
  std::string str() const;
};

struct GoldenTerm {
  int i = 0;  // 1-based; 0 means the identity factor
  int j = 0;
  AlphaCoefficient coeff;
};

struct GoldenDecomposition {
  std::string family;
  std::vector<GoldenTerm> terms;  // includes the (0, 0) identity term
  int settings = 0;
};

struct GoldenVertex {
  std::vector<Rational> p;
  /// Squared amplitudes of the two factors (unnormalized); empty when the
  /// vertex has no product state.
  std::vector<long> a_sq;
  std::vector<long> b_sq;
};

struct GoldenMaximum {
  std::vector<double> coeffs;
  Rational value;
  std::vector<Rational> argmax;  // empty when not listed
};

struct GoldenPlane {
  std::vector<double> coeffs;
  double offset = 1.0;
  std::string status;
};

struct GoldenRefinement {
  std::vector<std::vector<Rational>> seeds;
  std::vector<Rational> discovered;
};

struct GoldenThreshold {
  std::string family;
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = false;
  Rational alpha_star;
};

struct GoldenSection {
  std::vector<GoldenVertex> vertices;
  std::vector<GoldenMaximum> maxima;
  std::vector<GoldenPlane> planes;
  std::vector<GoldenRefinement> refinements;
  std::vector<GoldenThreshold> thresholds;
  /// Families that stay tangent at every listed alpha.
  std::vector<std::pair<std::string, std::vector<double>>> tangent_grids;
  std::vector<GoldenDecomposition> decompositions;
  /// Families whose members are positive operators at the listed alphas.
  std::vector<std::pair<std::string, std::vector<double>>> positive;
};

const GoldenSection& golden_s2();
const GoldenSection& golden_s3();

/// Collects pass/fail items for a report.
class CheckList {
 public:
  explicit CheckList(std::optional<double> tolerance_override) : override_(tolerance_override) {}

  void near(const std::string& item, double expected, double actual, double tolerance);
  void near(const std::string& item, const Rational& expected, double actual, double tolerance);
  void near(const std::string& item, const std::string& expected_text, double expected, double actual,
            double tolerance);
  void equal(const std::string& item, const std::string& expected, const std::string& actual);

  bool all_passed() const { return failed_ == 0; }
  int failed() const { return failed_; }
  int total() const { return static_cast<int>(items_.size()); }
  const nlohmann::ordered_json& items() const { return items_; }

 private:
  std::optional<double> override_;
  nlohmann::ordered_json items_ = nlohmann::ordered_json::array();
  int failed_ = 0;
};

}  // namespace ewgeom::cli
