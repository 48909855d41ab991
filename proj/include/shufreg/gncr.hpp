#pragma once

// Seeded shuffled regression by graduated non-convexity and Frank-Wolfe.
//
// With seeds C -> C* fixed, the remaining m = n - |C| X-rows (C-bar, ascending)
// are matched to the free Y-rows (C*-bar, ascending). The relaxed variable is
// E = D Y_hat for a doubly stochastic D, and the objective at continuation
// level mu is
//
//     g_mu(E) = 2 tr(Y_tilde^T L_tilde E) + tr(E^T L_hat E) - mu ||H E||_F^2,
//
// with H the m x m centering operator. Growing mu moves g_mu from convex to
// concave, which drives the iterate to a vertex E = P Y_hat.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shufreg/assignment.hpp"
#include "shufreg/core.hpp"

namespace shufreg {

struct GncrConfig {
  std::optional<double> lambda;  // unset: default_lambda(X)
  double gamma = 1.3;            // continuation factor, > 1
  std::optional<double> mu0;     // unset: mu_max / 1000
  double inner_tol = 1e-6;       // relative Frobenius change of the iterate
  int max_inner_iters = 300;
  int max_outer_iters = 200;
  bool use_fast_path = true;  // sort-based assignment when d_y == 1

  void validate() const {
    if (lambda && (!(*lambda >= 0.0) || !std::isfinite(*lambda))) {
      throw DataError("lambda must be finite and >= 0");
    }
    if (!(gamma > 1.0) || !std::isfinite(gamma)) throw DataError("gamma must be > 1");
    if (mu0 && (!(*mu0 > 0.0) || !std::isfinite(*mu0))) throw DataError("mu0 must be > 0");
    if (!(inner_tol > 0.0)) throw DataError("inner_tol must be > 0");
    if (max_inner_iters < 1 || max_outer_iters < 1) {
      throw DataError("iteration caps must be positive");
    }
  }
};

struct SeededPartition {
  Matrix y_hat;    // Y[C*-bar, :], m x d_y
  Matrix y_tilde;  // Y[C*, :] in seed order, |C| x d_y
  Matrix l_hat;    // L[C-bar, C-bar], m x m
  Matrix l_tilde;  // L[C, C-bar] in seed order, |C| x m
  std::vector<Index> free_x;  // C-bar, ascending
  std::vector<Index> free_y;  // C*-bar, ascending
  SeedSet seeds;

  Index free_rows() const { return static_cast<Index>(free_x.size()); }
};

struct StageTrace {
  double mu = 0.0;
  int iterations = 0;
  double objective = 0.0;  // g_mu at stage exit
  double step = 0.0;       // last alpha
  bool converged = false;
};

struct SolveResult {
  Permutation perm;
  Coefficients beta;
  Matrix y_est;  // de-shuffled labels, row i aligned with X-row i
  std::vector<StageTrace> trace;
  bool converged = true;  // false if any iteration cap bound
  std::vector<std::string> warnings;
};

struct MuSchedule {
  double mu0 = 0.0;
  double mu_max = 0.0;
  bool degenerate = false;  // L numerically zero: a single concave stage at mu0
};

struct LinearStep {
  Permutation perm;  // over the m free rows
  Matrix y_star;     // perm applied to Y_hat
};

struct LineSearchCoeffs {
  double eta1 = 0.0;
  double eta2 = 0.0;
};

/// Called after every Frank-Wolfe update with the stage's mu, the iteration
/// index within the stage, the new iterate and its g_mu.
using GncrObserver =
    std::function<void(double mu, int iteration, const Matrix& y_est_hat, double g_mu)>;

namespace detail {

/// Largest eigenvalue at or below which L counts as identically zero.
inline constexpr double kZeroSpectrum = 1e-12;

/// H z: subtract column means.
inline Matrix centered(const Matrix& z) {
  if (z.rows() == 0) return z;
  return z.rowwise() - z.colwise().mean();
}

inline double inner(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array()).sum();
}

inline void check_iterate(const SeededPartition& part, const Matrix& e) {
  if (e.rows() != part.y_hat.rows() || e.cols() != part.y_hat.cols()) {
    throw DimensionError("iterate shape " + std::to_string(e.rows()) + "x" +
                         std::to_string(e.cols()) + " does not match Y_hat");
  }
}

/// L_tilde^T Y_tilde, the constant part of the linearization (m x d_y).
inline Matrix cross_term(const SeededPartition& part) {
  if (part.y_tilde.rows() == 0) return Matrix::Zero(part.y_hat.rows(), part.y_hat.cols());
  return part.l_tilde.transpose() * part.y_tilde;
}

inline AssignmentResult rank_one_or_hungarian(const Matrix& scores, const Matrix& y_hat,
                                              bool fast, std::span<const Index> b_desc) {
  if (fast && y_hat.cols() == 1) {
    const std::span<const double> a(scores.data(), static_cast<std::size_t>(scores.rows()));
    const std::span<const double> b(y_hat.data(), static_cast<std::size_t>(y_hat.rows()));
    if (b_desc.empty()) return sort_assignment(a, b);
    return sort_assignment_presorted(a, b, b_desc);
  }
  return hungarian(scores * y_hat.transpose());
}

}  // namespace detail

inline SeededPartition partition_seeds(const Dataset& data, const Matrix& l, const SeedSet& seeds) {
  const Index n = data.rows();
  if (l.rows() != n || l.cols() != n) throw DimensionError("L must be n x n");
  seeds.validate(n);
  SeededPartition part;
  part.seeds = seeds;
  std::vector<char> seeded_x(n, 0), seeded_y(n, 0);
  for (Index i : seeds.x_rows()) seeded_x[i] = 1;
  for (Index j : seeds.y_rows()) seeded_y[j] = 1;
  for (Index i = 0; i < n; ++i) {
    if (!seeded_x[i]) part.free_x.push_back(i);
    if (!seeded_y[i]) part.free_y.push_back(i);
  }
  const auto m = part.free_rows();
  const auto k = static_cast<Index>(seeds.size());
  const Index dy = data.labels();

  part.y_hat.resize(m, dy);
  for (Index r = 0; r < m; ++r) part.y_hat.row(r) = data.y().row(part.free_y[r]);
  part.y_tilde.resize(k, dy);
  for (Index r = 0; r < k; ++r) part.y_tilde.row(r) = data.y().row(seeds.y_rows()[r]);
  part.l_hat.resize(m, m);
  for (Index r = 0; r < m; ++r) {
    for (Index c = 0; c < m; ++c) part.l_hat(r, c) = l(part.free_x[r], part.free_x[c]);
  }
  part.l_tilde.resize(k, m);
  for (Index r = 0; r < k; ++r) {
    for (Index c = 0; c < m; ++c) part.l_tilde(r, c) = l(seeds.x_rows()[r], part.free_x[c]);
  }
  return part;
}

inline double g_mu(const SeededPartition& part, const Matrix& y_est_hat, double mu) {
  detail::check_iterate(part, y_est_hat);
  const double cross = 2.0 * detail::inner(detail::cross_term(part), y_est_hat);
  const double quad = detail::inner(y_est_hat, part.l_hat * y_est_hat);
  return cross + quad - mu * detail::centered(y_est_hat).squaredNorm();
}

/// L_hat_mu E + L_tilde^T Y_tilde. The gradient of g_mu with respect to D is
/// 2 * scores * Y_hat^T.
inline Matrix linearization_scores(const SeededPartition& part, const Matrix& y_est_hat,
                                   double mu) {
  detail::check_iterate(part, y_est_hat);
  return part.l_hat * y_est_hat - mu * detail::centered(y_est_hat) + detail::cross_term(part);
}

/// Gradient of D -> g_mu(D Y_hat), an m x m matrix.
inline Matrix g_mu_gradient(const SeededPartition& part, const Matrix& d, double mu) {
  return 2.0 * linearization_scores(part, d * part.y_hat, mu) * part.y_hat.transpose();
}

/// Vertex of the Birkhoff polytope minimizing the linearized objective.
inline LinearStep fw_linear_step(const SeededPartition& part, const Matrix& y_est_hat, double mu,
                                 const GncrConfig& cfg) {
  const Matrix scores = linearization_scores(part, y_est_hat, mu);
  auto res = detail::rank_one_or_hungarian(scores, part.y_hat, cfg.use_fast_path, {});
  Matrix y_star = res.perm.apply(part.y_hat);
  return {std::move(res.perm), std::move(y_star)};
}

/// Coefficients of g_mu(E + alpha (Y* - E)) - g_mu(E) = eta2 alpha^2 - 2 eta1 alpha.
inline LineSearchCoeffs line_search_coeffs(const SeededPartition& part, const Matrix& y_est_hat,
                                           const Matrix& y_star, double mu) {
  detail::check_iterate(part, y_est_hat);
  detail::check_iterate(part, y_star);
  const Matrix le = part.l_hat * y_est_hat - mu * detail::centered(y_est_hat);
  const Matrix ls = part.l_hat * y_star - mu * detail::centered(y_star);
  const Matrix cross = detail::cross_term(part);
  const double c1 = detail::inner(y_star, ls);
  const double c2 = detail::inner(y_est_hat, le);
  const double c3 = detail::inner(y_est_hat, ls);
  const double c4 = detail::inner(cross, y_star);
  const double c5 = detail::inner(cross, y_est_hat);
  return {c2 - c3 - c4 + c5, c1 - 2.0 * c3 + c2};
}

/// argmin over alpha in [0, 1] of eta2 alpha^2 - 2 eta1 alpha. Ties go to the
/// smaller step.
inline double optimal_step(double eta1, double eta2) {
  if (std::isnan(eta1) || std::isnan(eta2)) throw DataError("optimal_step: NaN coefficient");
  if (eta1 >= 0.0) {
    if (eta2 > 0.0) return std::min(1.0, eta1 / eta2);
    return 1.0;
  }
  if (eta2 >= 0.0) return 0.0;
  // Concave with negative slope at 0: compare the endpoints, f(1) = eta2 - 2 eta1.
  return eta2 - 2.0 * eta1 < 0.0 ? 1.0 : 0.0;
}

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
inline double largest_eigenvalue(const Matrix& l, double rel_tol = 1e-6, int max_iters = 20000) {
  if (l.rows() != l.cols()) throw DimensionError("largest_eigenvalue: matrix not square");
  const Index n = l.rows();
  if (n == 0) return 0.0;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = 1.0 + 0.5 * std::sin(static_cast<double>(i + 1));
  v.normalize();
  double theta = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = l * v;
    const double w_norm = w.norm();
    if (w_norm == 0.0) return 0.0;
    const double next = v.dot(w);
    const double residual = (w - next * v).norm();
    if (residual <= rel_tol * std::abs(next) ||
        (it > 0 && std::abs(next - theta) <= 1e-14 * std::abs(next))) {
      return next;
    }
    theta = next;
    v = w / w_norm;
  }
  throw ConvergenceError("power iteration did not converge in " + std::to_string(max_iters) +
                         " iterations (last estimate " + std::to_string(theta) + ")");
}

inline MuSchedule mu_schedule(const Matrix& l, const GncrConfig& cfg) {
  MuSchedule s;
  s.mu_max = largest_eigenvalue(l);
  if (s.mu_max <= detail::kZeroSpectrum) {
    s.degenerate = true;
    s.mu0 = cfg.mu0.value_or(1.0);
    return s;
  }
  s.mu0 = cfg.mu0.value_or(std::max(1e-12 * s.mu_max, s.mu_max / 1000.0));
  return s;
}

/// Permutation P over the free rows minimizing ||P Y_hat - E||_F.
inline Permutation extract_permutation(const SeededPartition& part, const Matrix& y_est_hat,
                                       bool use_fast_path = true) {
  detail::check_iterate(part, y_est_hat);
  const Matrix neg = -y_est_hat;
  return detail::rank_one_or_hungarian(neg, part.y_hat, use_fast_path, {}).perm;
}

/// Full n x d_y estimate: seeded rows from Y_tilde, the rest from the iterate.
inline Matrix collate(const Matrix& y_est_hat, const Matrix& y_tilde, const SeedSet& seeds) {
  if (y_tilde.rows() != static_cast<Index>(seeds.size())) {
    throw DimensionError("collate: Y_tilde rows do not match the seed count");
  }
  if (y_est_hat.cols() != y_tilde.cols() && y_tilde.rows() > 0 && y_est_hat.rows() > 0) {
    throw DimensionError("collate: column counts differ");
  }
  const Index n = y_est_hat.rows() + y_tilde.rows();
  const Index dy = y_est_hat.rows() > 0 ? y_est_hat.cols() : y_tilde.cols();
  seeds.validate(n);
  Matrix out(n, dy);
  std::vector<char> seeded(n, 0);
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const Index i = seeds.x_rows()[k];
    out.row(i) = y_tilde.row(static_cast<Index>(k));
    seeded[i] = 1;
  }
  Index r = 0;
  for (Index i = 0; i < n; ++i) {
    if (!seeded[i]) out.row(i) = y_est_hat.row(r++);
  }
  return out;
}

/// Full permutation from seeds plus a permutation over the free rows.
inline Permutation assemble_permutation(const SeededPartition& part, const Permutation& free_perm) {
  const Index n = part.free_rows() + static_cast<Index>(part.seeds.size());
  std::vector<Index> mapping(n, -1);
  for (std::size_t k = 0; k < part.seeds.size(); ++k) {
    mapping[part.seeds.x_rows()[k]] = part.seeds.y_rows()[k];
  }
  for (Index r = 0; r < part.free_rows(); ++r) {
    mapping[part.free_x[r]] = part.free_y[free_perm[r]];
  }
  return Permutation(std::move(mapping));
}

inline SolveResult gncr_solve(const Dataset& data, const SeedSet& seeds, const GncrConfig& cfg,
                              const GncrObserver& observer = {}) {
  cfg.validate();
  const Index n = data.rows();
  seeds.validate(n);
  const double lambda = cfg.lambda.value_or(default_lambda(data.x()));
  SolveResult result;

  if (static_cast<Index>(seeds.size()) == n) {
    std::vector<Index> mapping(n);
    for (std::size_t k = 0; k < seeds.size(); ++k) mapping[seeds.x_rows()[k]] = seeds.y_rows()[k];
    result.perm = Permutation(std::move(mapping));
    result.beta = ridge_solve(data, result.perm, lambda);
    result.y_est = result.perm.apply(data.y());
    return result;
  }

  const ObjectiveMatrices om = objective_matrix(data.x(), lambda);
  const SeededPartition part = partition_seeds(data, om.L, seeds);
  const MuSchedule sched = mu_schedule(om.L, cfg);
  const Index m = part.free_rows();
  const bool fast = cfg.use_fast_path && data.labels() == 1;

  std::vector<Index> b_desc;
  if (fast) {
    b_desc = descending_order(
        std::span<const double>(part.y_hat.data(), static_cast<std::size_t>(m)));
  }
  const Matrix cross = detail::cross_term(part);

  // Barycenter of the polytope: every row is the column mean of Y_hat.
  Matrix e = Matrix::Ones(m, 1) * part.y_hat.colwise().mean();

  double mu = sched.mu0;
  for (int stage = 0; stage < cfg.max_outer_iters; ++stage) {
    if (stage > 0 && (sched.degenerate || mu > sched.mu_max)) break;
    StageTrace st;
    st.mu = mu;
    Matrix le = part.l_hat * e;  // refreshed per stage to bound drift
    for (int it = 0; it < cfg.max_inner_iters; ++it) {
      const Matrix scores = le - mu * detail::centered(e) + cross;
      const auto lmo = detail::rank_one_or_hungarian(scores, part.y_hat, fast, b_desc);
      const Matrix y_star = lmo.perm.apply(part.y_hat);
      const Matrix ls = part.l_hat * y_star;

      const Matrix he = detail::centered(e);
      const Matrix hs = detail::centered(y_star);
      const double c1 = detail::inner(y_star, ls) - mu * detail::inner(y_star, hs);
      const double c2 = detail::inner(e, le) - mu * detail::inner(e, he);
      const double c3 = detail::inner(e, ls) - mu * detail::inner(e, hs);
      const double c4 = detail::inner(cross, y_star);
      const double c5 = detail::inner(cross, e);
      const double eta1 = c2 - c3 - c4 + c5;
      const double eta2 = c1 - 2.0 * c3 + c2;
      const double alpha = optimal_step(eta1, eta2);

      const double e_norm = e.norm();
      const double change = alpha * (y_star - e).norm() / (e_norm > 0.0 ? e_norm : 1.0);
      if (alpha > 0.0) {
        e += alpha * (y_star - e);
        le += alpha * (ls - le);
      }
      st.iterations = it + 1;
      st.step = alpha;
      if (observer) observer(mu, it, e, g_mu(part, e, mu));
      if (change < cfg.inner_tol) {
        st.converged = true;
        break;
      }
    }
    st.objective = g_mu(part, e, mu);
    if (!st.converged) {
      result.converged = false;
      result.warnings.push_back("inner loop hit the iteration cap at mu = " + std::to_string(mu));
    }
    result.trace.push_back(st);
    mu *= cfg.gamma;
    if (stage + 1 == cfg.max_outer_iters && !sched.degenerate && mu <= sched.mu_max) {
      result.converged = false;
      result.warnings.push_back("outer loop hit the stage cap before mu exceeded mu_max");
    }
  }

  const Permutation free_perm = extract_permutation(part, e, cfg.use_fast_path);
  result.perm = assemble_permutation(part, free_perm);
  result.y_est = collate(e, part.y_tilde, seeds);
  result.beta = ridge_solve(data, result.perm, lambda);
  return result;
}

}  // namespace shufreg
