#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "shufreg/rng.hpp"
#include "shufreg/types.hpp"

namespace shufreg {

/// Y-rows are X-rows pushed through an unknown shuffle plus Gaussian noise.
/// truth_perm follows the Permutation convention, so
///   truth_perm.apply(Y) == X * truth_beta + truth_perm.apply(noise).
struct SynthInstance {
  Dataset data;
  Permutation truth_perm;
  Coefficients truth_beta;
  Matrix noise;  // indexed by Y-row
  double sigma = 0.0;
};

/// X ~ N(0,1), beta ~ N(0,1), uniform shuffle, noise ~ N(0, sigma^2). Each of
/// the four draws comes from its own labelled substream of `rng_seed`.
inline SynthInstance generate(Index n, Index d_x, Index d_y, double sigma, std::uint64_t rng_seed) {
  if (n < 1 || d_x < 1 || d_y < 1) throw DimensionError("generate: n, d_x, d_y must be >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DataError("generate: sigma must be >= 0");
  Rng x_rng(rng_seed, "X");
  Rng beta_rng(rng_seed, "beta");
  Rng perm_rng(rng_seed, "perm");
  Rng noise_rng(rng_seed, "noise");

  Matrix x = x_rng.normal_matrix(n, d_x);
  Coefficients beta = beta_rng.normal_matrix(d_x, d_y);
  Permutation perm = perm_rng.permutation(n);
  Matrix noise = noise_rng.normal_matrix(n, d_y, sigma);

  const Matrix clean = x * beta;
  Matrix y(n, d_y);
  for (Index i = 0; i < n; ++i) y.row(perm[i]) = clean.row(i);
  y += noise;
  return {Dataset(std::move(x), std::move(y)), std::move(perm), std::move(beta), std::move(noise),
          sigma};
}

/// ||beta||_F^2 / sigma^2; +inf when sigma == 0.
inline double snr(const Coefficients& beta, double sigma) {
  if (sigma < 0.0) throw DataError("snr: sigma must be >= 0");
  if (sigma == 0.0) return std::numeric_limits<double>::infinity();
  return beta.squaredNorm() / (sigma * sigma);
}

/// log(1 + snr) / log(n) > c1, evaluated as 1 + snr > n^c1 to keep exact
/// powers exact.
inline bool recovery_feasible(Index n, double snr_value, double c1 = 3.0) {
  if (n < 2) throw DataError("recovery_feasible: n must be >= 2");
  if (!(snr_value >= 0.0)) throw DataError("recovery_feasible: snr must be >= 0");
  if (std::isinf(snr_value)) return true;
  return 1.0 + snr_value > std::pow(static_cast<double>(n), c1);
}

}  // namespace shufreg
