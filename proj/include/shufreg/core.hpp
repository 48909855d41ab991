#pragma once

// Closed-form pieces of the ridge-regularized shuffled regression objective.
//
// For a fixed permutation Pi the ridge problem
//     min_beta ||Pi Y - X beta||_F^2 + lambda ||beta||_F^2
// is solved by beta = M X^T Pi Y with M = (X^T X + lambda I)^{-1}. Substituting
// back leaves a quadratic in Pi alone,
//     tr(Y^T Pi^T L Pi Y),   L = (S - I)^2 + lambda (X M)(X M)^T,   S = X M X^T,
// which is what the permutation solvers minimize.

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "shufreg/types.hpp"

namespace shufreg {

/// Condition number of X^T X above which an unregularized solve is refused.
inline constexpr double kMaxGramCondition = 1e12;

struct ObjectiveMatrices {
  Matrix M;  // (X^T X + lambda I)^{-1}, d_x x d_x
  Matrix S;  // X M X^T, n x n
  Matrix L;  // (S - I)^2 + lambda X M M X^T, n x n, symmetric PSD
};

/// Scale-aware near-OLS default: 1e-6 * tr(X^T X) / d_x.
inline double default_lambda(const Matrix& x) {
  return 1e-6 * x.squaredNorm() / static_cast<double>(x.cols());
}

namespace detail {

inline void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DataError("lambda must be a finite non-negative number");
  }
}

/// Cholesky factor of X^T X + lambda I.
inline Eigen::LLT<Matrix> factor_ridge(const Matrix& x, double lambda) {
  check_lambda(lambda);
  Matrix gram = x.transpose() * x;
  if (lambda == 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kMaxGramCondition) {
      throw SingularMatrixError(
          "X^T X is rank-deficient or ill-conditioned (condition > 1e12); "
          "use lambda > 0");
    }
  } else {
    gram.diagonal().array() += lambda;
  }
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("Cholesky factorization of X^T X + lambda I failed");
  }
  return llt;
}

inline Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace detail

/// M = (X^T X + lambda I)^{-1}.
inline Matrix ridge_gram(const Matrix& x, double lambda) {
  const auto llt = detail::factor_ridge(x, lambda);
  return detail::symmetrized(llt.solve(Matrix::Identity(x.cols(), x.cols())));
}

inline ObjectiveMatrices objective_matrix(const Matrix& x, double lambda) {
  ObjectiveMatrices om;
  om.M = ridge_gram(x, lambda);
  const Matrix xm = x * om.M;
  om.S = detail::symmetrized(xm * x.transpose());
  Matrix residual = om.S;
  residual.diagonal().array() -= 1.0;
  om.L = residual * residual;
  if (lambda > 0.0) om.L.noalias() += lambda * (xm * xm.transpose());
  om.L = detail::symmetrized(om.L);
  return om;
}

/// Ridge coefficients for labels re-ordered by `pi`.
inline Coefficients ridge_solve(const Matrix& x, const Matrix& y, const Permutation& pi,
                                double lambda) {
  if (x.rows() != y.rows()) throw DimensionError("X and Y row counts differ");
  const auto llt = detail::factor_ridge(x, lambda);
  return llt.solve(x.transpose() * pi.apply(y));
}

inline Coefficients ridge_solve(const Dataset& data, const Permutation& pi, double lambda) {
  return ridge_solve(data.x(), data.y(), pi, lambda);
}

/// tr(Y^T Pi^T L Pi Y).
inline double objective_value(const Matrix& l, const Permutation& pi, const Matrix& y) {
  if (l.rows() != l.cols() || l.rows() != y.rows()) {
    throw DimensionError("objective_value: L is " + std::to_string(l.rows()) + "x" +
                         std::to_string(l.cols()) + ", Y has " + std::to_string(y.rows()) +
                         " rows");
  }
  const Matrix py = pi.apply(y);
  return (py.array() * (l * py).array()).sum();
}

/// ||Pi Y - X beta||_F^2 + lambda ||beta||_F^2, the un-reduced ridge objective.
inline double ridge_objective(const Matrix& x, const Matrix& y, const Permutation& pi,
                              const Coefficients& beta, double lambda) {
  return (pi.apply(y) - x * beta).squaredNorm() + lambda * beta.squaredNorm();
}

}  // namespace shufreg
