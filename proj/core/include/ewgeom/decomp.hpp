#pragma once

#include "ewgeom/qmath.hpp"

namespace ewgeom {

/// W = c00 I(x)I + sum_j c0j I(x)lambda_j + sum_i ci0 lambda_i(x)I
///       + sum_ij cij lambda_i(x)lambda_j
/// with generalized Gell-Mann matrices, Tr(lambda_i lambda_j) = 2 delta_ij.
struct LocalDecomposition {
  Eigen::Index n = 0;
  double identity = 0.0;
  /// ci0, index i-1.
  RealVector local_a;
  /// c0j, index j-1.
  RealVector local_b;
  /// cij at (i-1, j-1).
  RealMatrix correlations;

  /// cij with 1-based generator labels as written (lambda_1 .. lambda_{n^2-1}).
  double correlation(Eigen::Index i, Eigen::Index j) const { return correlations(i - 1, j - 1); }
  HermitianOperator reconstruct() const;
};

/// Throws DimensionError unless w.dim() == n^2.
LocalDecomposition decompose(const HermitianOperator& w, Eigen::Index n);

/// Number of correlation terms with |cij| > threshold.
int settings_count(const LocalDecomposition& d, double threshold = 1e-10);
/// Number of single-sided terms with |ci0| or |c0j| > threshold.
int single_sided_terms(const LocalDecomposition& d, double threshold = 1e-10);

}  // namespace ewgeom
