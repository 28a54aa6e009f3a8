#include "ewgeom/states.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace ewgeom {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

std::string format(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void compositions(int total, Eigen::Index parts, std::vector<int>& prefix,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<Eigen::Index>(prefix.size()) == parts - 1) {
    prefix.push_back(total);
    emit(prefix);
    prefix.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    prefix.push_back(k);
    compositions(total - k, parts, prefix, emit);
    prefix.pop_back();
  }
}

}  // namespace

MixtureState::MixtureState(RealVector weights) : weights_(std::move(weights)) {
  if (weights_.size() < 2) throw std::invalid_argument("a mixture needs at least two weights");
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_(i)) || weights_(i) < 0.0) {
      throw std::invalid_argument("mixture weight a_" + std::to_string(i + 1) + " = " + format(weights_(i)) +
                                  " is negative");
    }
  }
  if (std::abs(weights_.sum() - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument("mixture weights sum to " + format(weights_.sum()) + ", expected 1");
  }
}

MixtureState::MixtureState(std::initializer_list<double> weights)
    : MixtureState(RealVector(Eigen::Map<const RealVector>(weights.begin(), static_cast<Eigen::Index>(weights.size())))) {}

MixtureState horodecki_weights(double beta) {
  if (beta < 0.0 || beta > 5.0) throw std::invalid_argument("beta must lie in [0, 5]");
  return MixtureState{beta / 7.0, (5.0 - beta) / 7.0, 2.0 / 7.0};
}

MixtureState varrho_weights(double beta, double gamma) {
  if (beta < 0.0 || beta > 10.0) throw std::invalid_argument("beta must lie in [0, 10]");
  if (gamma < 0.0) throw std::invalid_argument("gamma must be non-negative");
  const double z = 13.0 + gamma;
  return MixtureState{beta / z, gamma / z, (10.0 - beta) / z, 3.0 / z};
}

HermitianOperator mixture(const MixtureState& state, const OperatorBasis& basis) {
  return basis.combine(state.weights());
}

bool ppt_closed_form(const MixtureState& s) {
  if (s.n() == 3) return s[0] * s[1] >= s[2] * s[2];
  if (s.n() == 4) return s[0] * s[2] >= s[3] * s[3] && s[1] >= s[3];
  throw std::invalid_argument("closed-form PPT test exists for n = 3 and n = 4 only");
}

bool ppt_eigen(const HermitianOperator& rho, Eigen::Index local_dim) {
  return min_eigenvalue(partial_transpose(rho, local_dim)) >= -tol::positivity;
}

double trace_against_family(const MixtureState& state, const WitnessFamily& family, double alpha,
                            const OperatorBasis& basis) {
  if (state.n() != family.n) throw DimensionError("mixture and family dimensions differ");
  return family.materialize(alpha, basis).trace_with(mixture(state, basis));
}

HermitianOperator random_density_matrix(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return HermitianOperator(0.5 * (rho + rho.adjoint()));
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::separable_consistent: return "separable_consistent";
    case Classification::ppt_entangled: return "ppt_entangled";
    case Classification::free_entangled: return "free_entangled";
    case Classification::unknown: return "unknown";
  }
  return "unknown";
}

bool in_reference_separable_set(const MixtureState& s) {
  if (s.n() != 3) return false;
  constexpr double eps = 1e-12;
  if (std::abs(s[2] - 2.0 / 7.0) > eps) return false;
  const double beta = 7.0 * s[0];
  return beta >= 2.0 - eps && beta <= 3.0 + eps;
}

DetectionReport classify(const MixtureState& state, const OperatorBasis& basis,
                         const std::vector<WitnessFamily>& families, const ClassifyOptions& options,
                         std::string state_id) {
  if (state.n() != basis.local_dim()) throw DimensionError("mixture does not match the basis");

  DetectionReport report;
  report.state_id = std::move(state_id);
  report.state = state;
  const HermitianOperator rho = mixture(state, basis);
  report.ppt = ppt_eigen(rho, basis.local_dim());

  for (const auto& family : families) {
    if (family.n != state.n()) continue;
    for (double alpha : family.samples(options.samples)) {
      const double t = family.materialize(alpha, basis).trace_with(rho);
      if (t < -options.threshold) report.detected_by.push_back({family.label, alpha, t});
    }
  }

  if (!report.detected_by.empty()) {
    report.classification = report.ppt ? Classification::ppt_entangled : Classification::free_entangled;
  } else if (!report.ppt) {
    report.classification = Classification::free_entangled;
  } else if (in_reference_separable_set(state)) {
    report.classification = Classification::separable_consistent;
  } else {
    report.classification = Classification::unknown;
  }
  return report;
}

DetectionCorpus::DetectionCorpus(const OperatorBasis& basis, int random_states, std::uint64_t seed)
    : basis_(basis) {
  const Eigen::Index n = basis.local_dim();

  std::vector<int> prefix;
  compositions(20, n, prefix, [&](const std::vector<int>& parts) {
    RealVector w(n);
    std::ostringstream label;
    label << "grid(";
    for (Eigen::Index i = 0; i < n; ++i) {
      w(i) = parts[static_cast<std::size_t>(i)] / 20.0;
      label << (i ? "," : "") << parts[static_cast<std::size_t>(i)] << "/20";
    }
    label << ")";
    mixtures_.emplace_back(std::move(w));
    mixture_labels_.push_back(label.str());
  });

  if (n == 3) {
    for (int k = 0; k <= 50; ++k) {
      const double beta = k / 10.0;
      mixtures_.push_back(horodecki_weights(beta));
      mixture_labels_.push_back("rho_beta(beta=" + format(beta) + ")");
    }
  }
  if (n == 4) {
    for (int k = 0; k <= 20; ++k) {
      for (int g = 0; g <= 8; ++g) {
        const double beta = k / 2.0;
        mixtures_.push_back(varrho_weights(beta, g));
        mixture_labels_.push_back("varrho(beta=" + format(beta) + ",gamma=" + std::to_string(g) + ")");
      }
    }
  }

  std::mt19937_64 rng(seed);
  random_.reserve(static_cast<std::size_t>(std::max(random_states, 0)));
  for (int i = 0; i < random_states; ++i) random_.push_back(random_density_matrix(n * n, rng));
}

std::optional<DetectionCorpus::Hit> DetectionCorpus::most_negative(const HermitianOperator& w) const {
  if (w.dim() != basis_.local_dim() * basis_.local_dim()) throw DimensionError("operator does not match the corpus");
  std::optional<Hit> best;
  auto offer = [&](std::size_t index, double t) {
    if (!best || t < best->trace) best = Hit{index, t};
  };

  // Tr(W sum a_i O_i) = sum a_i Tr(W O_i)
  RealVector overlaps(static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i) overlaps(static_cast<Eigen::Index>(i)) = w.trace_with(basis_[i]);
  for (std::size_t i = 0; i < mixtures_.size(); ++i) offer(i, overlaps.dot(mixtures_[i].weights()));
  for (std::size_t i = 0; i < random_.size(); ++i) offer(mixtures_.size() + i, w.trace_with(random_[i]));
  return best;
}

HermitianOperator DetectionCorpus::state(std::size_t index) const {
  if (index < mixtures_.size()) return mixture(mixtures_[index], basis_);
  return random_.at(index - mixtures_.size());
}

std::string DetectionCorpus::label(std::size_t index) const {
  if (index < mixtures_.size()) return mixture_labels_[index];
  if (index - mixtures_.size() >= random_.size()) throw std::out_of_range("corpus index out of range");
  return "random_hs(" + std::to_string(index - mixtures_.size()) + ")";
}

}  // namespace ewgeom
