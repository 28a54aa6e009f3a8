#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ewgeom/basis.hpp"
#include "ewgeom/qmath.hpp"

namespace ewgeom {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Thrown when no seesaw restart reaches the value tolerance within the
/// iteration cap. Carries the best value seen.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double best_value)
      : std::runtime_error(what), best_value_(best_value) {}
  double best_value() const { return best_value_; }

 private:
  double best_value_;
};

/// Expectations (p_1..p_n) of the basis operators in a product state.
/// Entries lie in [0, 1/n] and sum to at most 1.
class PVector {
 public:
  PVector() = default;
  explicit PVector(RealVector values);
  PVector(std::initializer_list<double> values);

  Eigen::Index n() const { return values_.size(); }
  const RealVector& values() const { return values_; }
  double operator[](Eigen::Index i) const { return values_(i); }

 private:
  RealVector values_;
};

enum class PlaneStatus { unverified, exact_boundary, tangent, intersecting };

std::string_view to_string(PlaneStatus status);

/// Evidence collected while certifying a plane.
struct PlaneCertificate {
  double max_value = 0.0;
  /// Affine rank of the p-vectors of all restart maximizers that reach the
  /// maximum (within the face band).
  int face_rank = 0;
  std::size_t maximizers = 0;
  ProductState argmax;
};

/// The half-space c.p <= r. Faces of the form p_i >= 0 are stored as
/// (-e_i).p <= 0.
class Hyperplane {
 public:
  Hyperplane(RealVector coeffs, double offset);

  Eigen::Index n() const { return coeffs_.size(); }
  const RealVector& coeffs() const { return coeffs_; }
  double offset() const { return offset_; }
  PlaneStatus status() const { return status_; }
  const std::optional<PlaneCertificate>& certificate() const { return certificate_; }

  double evaluate(const PVector& p) const { return coeffs_.dot(p.values()); }
  /// Rescaled so the offset is 1. Throws for offset <= 0.
  Hyperplane normalized() const;
  Hyperplane with_certificate(PlaneStatus status, PlaneCertificate certificate) const;

 private:
  RealVector coeffs_;
  double offset_;
  PlaneStatus status_ = PlaneStatus::unverified;
  std::optional<PlaneCertificate> certificate_;
};

struct SeesawOptions {
  int restarts = 64;
  std::uint64_t seed = kDefaultSeed;
  int max_iterations = 500;
  /// A restart has converged once a full sweep changes the value by less
  /// than this.
  double value_tolerance = 1e-12;
  /// Extra sweeps after convergence, stopped as soon as the value stops
  /// increasing. Tightens the maximizer without changing the value.
  int polish_iterations = 500;
};

struct RestartOutcome {
  double value = 0.0;
  ProductState state;
  int iterations = 0;
  bool converged = false;
};

struct SeesawRun {
  std::vector<RestartOutcome> restarts;
  std::size_t best = 0;

  const RestartOutcome& best_outcome() const { return restarts[best]; }
};

/// Maximizes <ab|target|ab> over product states by alternating top
/// eigenvector updates. Restarts are seeded independently from
/// (options.seed, restart index) and reduced by max. A restart that hits
/// the iteration cap still counts: its value is attained by its state.
/// Throws NonConvergenceError only when no restart converged.
SeesawRun seesaw_maximize(const HermitianOperator& target, Eigen::Index local_dim,
                          const SeesawOptions& options = {});

struct MaximizationResult {
  double value = 0.0;
  ProductState argmax;
  PVector pvec;
  /// Restarts whose value is within the decision tolerance of the maximum.
  int restarts_agreeing = 0;
};

/// p_i = <ab|O_i|ab> from the closed-form moduli expressions:
///   p_k = (1/n) sum_i |a_i|^2 |b_{i+k}|^2,  p_n = (1/n) |sum_i a_i b_i|^2.
PVector p_vector(const ProductState& s, const OperatorBasis& basis);

MaximizationResult maximize_functional(const RealVector& coeffs, const OperatorBasis& basis,
                                       const SeesawOptions& options = {});

/// Exhaustive lower bound on max c.p: squared moduli of both factors range
/// over the simplex grid with `resolution` steps per coordinate; phases are
/// aligned for c_n >= 0 and scanned on an 8-point grid otherwise.
double grid_oracle_max(const RealVector& coeffs, const OperatorBasis& basis, int resolution);

struct CertifyOptions {
  SeesawOptions seesaw;
  /// max > offset + contact_tolerance  =>  intersecting.
  double contact_tolerance = tol::certify;
  /// Restart maximizers within this band of the maximum enter the face probe.
  double face_band = 1e-8;
  /// Singular-value threshold of the affine-rank probe.
  double rank_tolerance = 1e-6;
};

Hyperplane certify_plane(const Hyperplane& plane, const OperatorBasis& basis, const CertifyOptions& options = {});

/// Plane through n affinely independent points, oriented with offset >= 0.
/// Throws std::invalid_argument for a degenerate point set.
Hyperplane fit_plane(const std::vector<PVector>& points);

/// Affine rank of a point set (0 for a single point).
int affine_rank(const std::vector<RealVector>& points, double tolerance);

struct RefinementStep {
  Hyperplane plane;
  std::optional<PVector> discovered;
};

/// Picks the next n vertices from everything found so far. Receives all
/// vertices in discovery order (seeds first) and the latest discovery.
using VertexSelector =
    std::function<std::vector<PVector>(const std::vector<PVector>& vertices, const PVector& discovered)>;

/// Fit a plane through the current vertices and maximize. While the plane
/// cuts the region, the maximizer's p-vector is recorded as a new vertex and
/// `select` chooses the next vertex set. Stops after `max_rounds`, when the
/// plane certifies as exact_boundary or tangent, or when no selector is
/// given.
std::vector<RefinementStep> refine_boundary(const std::vector<PVector>& seed_vertices, const OperatorBasis& basis,
                                            int max_rounds, const VertexSelector& select = {},
                                            const CertifyOptions& options = {});

using PlaneFamily = std::function<Hyperplane(double alpha)>;

struct AlphaRange {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = false;
  bool hi_open = false;
};

struct TangencyOptions {
  CertifyOptions certify = [] {
    CertifyOptions o;
    // Past a rotation limit the excess grows like (alpha - alpha*)^2 or
    // faster, so the predicate needs a tolerance near seesaw precision.
    o.contact_tolerance = 1e-10;
    return o;
  }();
  double accuracy = tol::alpha_threshold;
};

struct TangencyResult {
  /// Largest alpha in range known not to intersect the region.
  double alpha_star = 0.0;
  /// True when every sample up to the upper end stayed non-intersecting.
  bool reached_range_end = false;
  std::vector<std::pair<double, PlaneStatus>> samples;
};

class NonMonotoneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

TangencyResult tangency_interval(const PlaneFamily& family, const AlphaRange& range, int samples,
                                 const OperatorBasis& basis, const TangencyOptions& options = {});

struct ConjectureReport {
  Eigen::Index n = 0;
  Hyperplane plane{RealVector::Ones(1), 1.0};
  double max_value = 0.0;
  ProductState argmax;
};

/// Certifies n(p_1 + ... + p_{n-1}) + p_n <= 1.
ConjectureReport conjectured_boundary_check(Eigen::Index n, const CertifyOptions& options = {});

}  // namespace ewgeom
