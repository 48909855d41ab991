#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "shufreg/assignment.hpp"
#include "shufreg/core.hpp"
#include "shufreg/gncr.hpp"
#include "shufreg/rng.hpp"

namespace shufreg {

/// Ridge (OLS at lambda = 0) on data whose row pairing is known to be correct.
inline Coefficients ols_unshuffled(const Dataset& data, double lambda) {
  return ridge_solve(data, Permutation::identity(data.rows()), lambda);
}

struct NaiveAoConfig {
  double lambda = 0.0;
  std::optional<Coefficients> init_beta;  // unset: ridge on the given row order
  int max_iters = 100;
  double beta_tol = 1e-8;
  int restarts = 0;  // extra runs from uniformly random initial permutations
  std::uint64_t rng_seed = 0;
  bool use_fast_path = true;
};

/// argmin_Pi ||Pi Y - X beta||_F^2 as a linear assignment.
inline Permutation best_permutation_for(const Dataset& data, const Coefficients& beta,
                                        bool use_fast_path = true) {
  const Matrix pred = data.x() * beta;
  // ||Pi Y - P||^2 = const - 2 sum_i <P_i, Y_pi(i)>.
  if (use_fast_path && data.labels() == 1) {
    const Vector a = -pred.col(0);
    const Vector b = data.y().col(0);
    return sort_assignment(a, b).perm;
  }
  return hungarian(-pred * data.y().transpose()).perm;
}

namespace detail {

inline SolveResult naive_ao_from(const Dataset& data, Coefficients beta, const NaiveAoConfig& cfg) {
  SolveResult res;
  std::optional<Permutation> prev;
  res.converged = false;
  for (int t = 0; t < cfg.max_iters; ++t) {
    Permutation pi = best_permutation_for(data, beta, cfg.use_fast_path);
    const bool same_perm = prev && *prev == pi;
    Coefficients next = ridge_solve(data, pi, cfg.lambda);
    const double denom = std::max(beta.norm(), std::numeric_limits<double>::min());
    const double change = (next - beta).norm() / denom;
    beta = std::move(next);
    res.trace.push_back({0.0, t + 1, ridge_objective(data.x(), data.y(), pi, beta, cfg.lambda),
                         change, same_perm});
    prev = std::move(pi);
    // An unchanged permutation reproduces beta exactly, so this is a fixed point.
    if (same_perm) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged) {
    res.warnings.push_back("naive alternating optimization hit the iteration cap");
  }
  res.perm = *prev;
  res.beta = beta;
  res.y_est = res.perm.apply(data.y());
  return res;
}

}  // namespace detail

/// Alternates an exact permutation step and an exact ridge step.
inline SolveResult naive_ao(const Dataset& data, const NaiveAoConfig& cfg = {}) {
  if (cfg.max_iters < 1) throw DataError("max_iters must be positive");
  Coefficients beta0 = cfg.init_beta ? *cfg.init_beta : ols_unshuffled(data, cfg.lambda);
  if (beta0.rows() != data.features() || beta0.cols() != data.labels()) {
    throw DimensionError("init_beta must be d_x x d_y");
  }
  SolveResult best = detail::naive_ao_from(data, std::move(beta0), cfg);
  auto objective = [&](const SolveResult& r) {
    return ridge_objective(data.x(), data.y(), r.perm, r.beta, cfg.lambda);
  };
  Rng rng(cfg.rng_seed, "naive-ao-restart");
  for (int r = 0; r < cfg.restarts; ++r) {
    const Permutation p0 = rng.permutation(data.rows());
    SolveResult cand = detail::naive_ao_from(data, ridge_solve(data, p0, cfg.lambda), cfg);
    if (objective(cand) < objective(best)) best = std::move(cand);
  }
  return best;
}

}  // namespace shufreg
