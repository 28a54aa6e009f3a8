#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ewgeom/basis.hpp"
#include "ewgeom/qmath.hpp"
#include "ewgeom/region.hpp"

namespace ewgeom {

class DetectionCorpus;

/// One connected piece of an alpha domain. Infinite ends are allowed; a
/// closed piece with lo == hi is a single point.
struct AlphaInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double alpha) const;
};

class AlphaDomain {
 public:
  AlphaDomain() = default;
  explicit AlphaDomain(std::vector<AlphaInterval> pieces);

  bool contains(double alpha) const;
  const std::vector<AlphaInterval>& pieces() const { return pieces_; }

  /// `count` deterministic points spread over the pieces in proportion to
  /// their length. Infinite ends are cut at -cap / +cap; open ends are
  /// stepped inside by one spacing; point pieces get exactly one sample.
  std::vector<double> sample(int count, double cap) const;

  /// e.g. "(-inf, 0) U {0} U [1, inf)"
  std::string describe() const;

 private:
  std::vector<AlphaInterval> pieces_;
};

/// A parametric family of planes c(alpha).p <= 1 and the witnesses
/// W(alpha) = I (x) I - sum_i c_i(alpha) O_i.
struct WitnessFamily {
  std::string label;
  Eigen::Index n = 0;
  std::function<RealVector(double)> coeff_fn;
  AlphaDomain domain;
  /// Where the family degenerates to the face p_n >= 0; the witness there
  /// is O_n itself.
  std::optional<double> face_alpha;
  /// Upper/lower cut for sweeps over unbounded domains.
  double sweep_cap = 8.0;

  bool contains(double alpha) const { return domain.contains(alpha); }
  /// Plane at alpha, also outside the validity domain.
  Hyperplane plane(double alpha) const;
  /// Witness operator at alpha. Throws std::out_of_range outside the domain.
  HermitianOperator materialize(double alpha, const OperatorBasis& basis) const;
  std::vector<double> samples(int count) const { return domain.sample(count, sweep_cap); }
};

/// W = I (x) I - sum_i c_i O_i for the plane rescaled to c.p <= 1.
/// Throws std::invalid_argument when the offset is not positive.
HermitianOperator witness_from_plane(const Hyperplane& plane, const OperatorBasis& basis);

/// Named families for n = 3 (W3, W3p, W3pp) and n = 4 (W4, W4p, W4pp, W4ppp).
std::vector<WitnessFamily> builtin_families(Eigen::Index n);
/// Looks a family up by label across both dimensions.
WitnessFamily find_family(const std::string& label);

struct WitnessCertificate {
  double min_product_expectation = 0.0;
  ProductState product_minimizer;
  bool detected_state_found = false;
  std::optional<HermitianOperator> detecting_state;
  std::string detecting_state_label;
  double detecting_trace = 0.0;
  bool is_positive_operator = false;

  /// Non-negative on product states and negative on some state.
  bool is_witness(double tolerance = tol::decision) const {
    return min_product_expectation >= -tolerance && detected_state_found;
  }
};

struct WitnessCheckOptions {
  SeesawOptions seesaw;
  int random_states = 10000;
  double detection_threshold = tol::positivity;
};

/// min <ab|W|ab> over product states, operator positivity, and a detection
/// scan over the mixture families plus random density matrices. Pass a
/// prebuilt corpus to reuse it across calls.
WitnessCertificate certify_witness(const HermitianOperator& w, const OperatorBasis& basis,
                                   const WitnessCheckOptions& options = {}, const DetectionCorpus* corpus = nullptr);

}  // namespace ewgeom
