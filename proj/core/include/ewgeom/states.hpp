#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ewgeom/basis.hpp"
#include "ewgeom/qmath.hpp"
#include "ewgeom/witness.hpp"

namespace ewgeom {

/// Weights a_1..a_n of the mixture sum_i a_i O_i. Non-negative, summing to 1.
class MixtureState {
 public:
  MixtureState() = default;
  /// Throws std::invalid_argument for a negative weight or a sum off by
  /// more than 1e-9.
  explicit MixtureState(RealVector weights);
  MixtureState(std::initializer_list<double> weights);

  Eigen::Index n() const { return weights_.size(); }
  const RealVector& weights() const { return weights_; }
  double operator[](Eigen::Index i) const { return weights_(i); }

 private:
  RealVector weights_;
};

/// (beta/7, (5-beta)/7, 2/7), beta in [0, 5].
MixtureState horodecki_weights(double beta);
/// (beta, gamma, 10-beta, 3)/(13+gamma), beta in [0, 10], gamma >= 0.
MixtureState varrho_weights(double beta, double gamma);

HermitianOperator mixture(const MixtureState& state, const OperatorBasis& basis);

/// a1 a2 >= a3^2 for n = 3; a1 a3 >= a4^2 and a2 >= a4 for n = 4.
bool ppt_closed_form(const MixtureState& state);
/// Smallest eigenvalue of the partial transpose >= -1e-10.
bool ppt_eigen(const HermitianOperator& rho, Eigen::Index local_dim);

/// Tr(W(alpha) rho) via the materialized matrices. Throws std::out_of_range
/// when alpha is outside the family's domain.
double trace_against_family(const MixtureState& state, const WitnessFamily& family, double alpha,
                            const OperatorBasis& basis);

/// Hilbert-Schmidt random density matrix G G^+ / Tr(G G^+), G complex Ginibre.
HermitianOperator random_density_matrix(Eigen::Index dim, std::mt19937_64& rng);

enum class Classification { separable_consistent, ppt_entangled, free_entangled, unknown };

std::string_view to_string(Classification c);

struct Detection {
  std::string family;
  double alpha = 0.0;
  double trace = 0.0;
};

struct DetectionReport {
  std::string state_id;
  MixtureState state;
  bool ppt = false;
  std::vector<Detection> detected_by;
  Classification classification = Classification::unknown;
};

struct ClassifyOptions {
  int samples = 25;
  /// Tr(W rho) below -threshold counts as a detection.
  double threshold = tol::positivity;
};

/// True on the n = 3 line (beta/7, (5-beta)/7, 2/7) with 2 <= beta <= 3,
/// the only parameter set the classifier accepts as known separable.
bool in_reference_separable_set(const MixtureState& state);

DetectionReport classify(const MixtureState& state, const OperatorBasis& basis,
                         const std::vector<WitnessFamily>& families, const ClassifyOptions& options = {},
                         std::string state_id = {});

/// Fixed set of states used to look for a negative expectation: the
/// simplex grid of mixtures (step 1/20), the beta line (n = 3, step 0.1),
/// the (beta, gamma) grid (n = 4, steps 0.5 and 1), and seeded random
/// density matrices.
class DetectionCorpus {
 public:
  DetectionCorpus(const OperatorBasis& basis, int random_states, std::uint64_t seed);

  struct Hit {
    std::size_t index = 0;
    double trace = 0.0;
  };

  std::size_t size() const { return mixtures_.size() + random_.size(); }
  /// The state with the smallest Tr(W rho), if the corpus is non-empty.
  std::optional<Hit> most_negative(const HermitianOperator& w) const;
  HermitianOperator state(std::size_t index) const;
  std::string label(std::size_t index) const;

 private:
  OperatorBasis basis_;
  std::vector<MixtureState> mixtures_;
  std::vector<std::string> mixture_labels_;
  std::vector<HermitianOperator> random_;
};

}  // namespace ewgeom
