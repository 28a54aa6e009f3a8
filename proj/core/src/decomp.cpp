#include "ewgeom/decomp.hpp"

#include <cmath>
#include <string>

namespace ewgeom {

LocalDecomposition decompose(const HermitianOperator& w, Eigen::Index n) {
  if (n < 2 || w.dim() != n * n) {
    throw DimensionError("operator of dimension " + std::to_string(w.dim()) + " is not on C^" + std::to_string(n) +
                         " (x) C^" + std::to_string(n));
  }
  const auto lambda = gell_mann_basis(n);
  const Eigen::Index g = static_cast<Eigen::Index>(lambda.size());
  const HermitianOperator id = HermitianOperator::identity(n);
  const double nd = static_cast<double>(n);

  LocalDecomposition d;
  d.n = n;
  d.identity = w.trace() / (nd * nd);
  d.local_a.resize(g);
  d.local_b.resize(g);
  d.correlations.resize(g, g);
  for (Eigen::Index i = 0; i < g; ++i) {
    d.local_a(i) = w.trace_with(tensor(lambda[i], id)) / (2.0 * nd);
    d.local_b(i) = w.trace_with(tensor(id, lambda[i])) / (2.0 * nd);
  }
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index j = 0; j < g; ++j) d.correlations(i, j) = w.trace_with(tensor(lambda[i], lambda[j])) / 4.0;
  }
  return d;
}

HermitianOperator LocalDecomposition::reconstruct() const {
  const auto lambda = gell_mann_basis(n);
  const HermitianOperator id = HermitianOperator::identity(n);
  HermitianOperator out = identity * HermitianOperator::identity(n * n);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    out += local_a(ii) * tensor(lambda[i], id);
    out += local_b(ii) * tensor(id, lambda[i]);
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      out += correlations(ii, static_cast<Eigen::Index>(j)) * tensor(lambda[i], lambda[j]);
    }
  }
  return out;
}

int settings_count(const LocalDecomposition& d, double threshold) {
  return static_cast<int>((d.correlations.array().abs() > threshold).count());
}

int single_sided_terms(const LocalDecomposition& d, double threshold) {
  return static_cast<int>((d.local_a.array().abs() > threshold).count() +
                          (d.local_b.array().abs() > threshold).count());
}

}  // namespace ewgeom
