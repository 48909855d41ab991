#pragma once

#include <cmath>

#include "shufreg/types.hpp"

namespace shufreg {

/// Fraction of rows on which two permutations agree, <P_est, P_true> / n.
inline double perm_overlap(const Permutation& est, const Permutation& truth) {
  if (est.size() != truth.size()) throw DimensionError("perm_overlap: size mismatch");
  if (est.size() == 0) return 1.0;
  Index hits = 0;
  for (Index i = 0; i < est.size(); ++i) hits += est[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(est.size());
}

/// Frobenius cosine between two coefficient matrices.
inline double beta_correlation(const Coefficients& est, const Coefficients& ref) {
  if (est.rows() != ref.rows() || est.cols() != ref.cols()) {
    throw DimensionError("beta_correlation: shape mismatch");
  }
  const double ne = est.norm();
  const double nr = ref.norm();
  if (ne == 0.0 || nr == 0.0) throw DataError("beta_correlation: zero-norm coefficients");
  return (est.array() * ref.array()).sum() / (ne * nr);
}

/// ||Pi Y - X beta||_F / ||Y||_F.
inline double train_error(const Dataset& data, const Permutation& est, const Coefficients& beta) {
  const double ny = data.y().norm();
  if (ny == 0.0) throw DataError("train_error: Y has zero norm");
  return (est.apply(data.y()) - data.x() * beta).norm() / ny;
}

/// ||Y - X beta||_F / ||Y||_F on data assumed correctly paired.
inline double test_error(const Dataset& test, const Coefficients& beta) {
  const double ny = test.y().norm();
  if (ny == 0.0) throw DataError("test_error: Y has zero norm");
  return (test.y() - test.x() * beta).norm() / ny;
}

}  // namespace shufreg
