#include <gtest/gtest.h>

#include "oracles.hpp"
#include "shufreg/baselines.hpp"
#include "shufreg/rng.hpp"
#include "shufreg/synth.hpp"

using namespace shufreg;

TEST(OlsUnshuffled, IdentityDesignInterpolates) {
  Rng rng(61);
  const Matrix y = rng.normal_matrix(4, 2);
  EXPECT_TRUE(ols_unshuffled(Dataset(Matrix::Identity(4, 4), y), 0.0).isApprox(y));
}

TEST(OlsUnshuffled, IsRidgeWithIdentityPairing) {
  Rng rng(62);
  const Dataset d(rng.normal_matrix(12, 3), rng.normal_matrix(12, 2));
  EXPECT_EQ(ols_unshuffled(d, 0.2), ridge_solve(d, Permutation::identity(12), 0.2));
  const Matrix ref = oracle::ridge_qr(d.x(), d.y(), 0.2);
  EXPECT_LT((ols_unshuffled(d, 0.2) - ref).norm(), 1e-10);
}

TEST(BestPermutationFor, FastPathMatchesHungarian) {
  Rng rng(63);
  for (int t = 0; t < 20; ++t) {
    const Dataset d(rng.normal_matrix(30, 2), rng.normal_matrix(30, 1));
    const Coefficients beta = rng.normal_matrix(2, 1);
    const Permutation a = best_permutation_for(d, beta, true);
    const Permutation b = best_permutation_for(d, beta, false);
    const double ra = (a.apply(d.y()) - d.x() * beta).squaredNorm();
    const double rb = (b.apply(d.y()) - d.x() * beta).squaredNorm();
    EXPECT_NEAR(ra, rb, 1e-9 * std::max(1.0, rb));
  }
}

TEST(BestPermutationFor, MatchesExhaustiveSearch) {
  Rng rng(64);
  for (int t = 0; t < 5; ++t) {
    const Dataset d(rng.normal_matrix(6, 2), rng.normal_matrix(6, 2));
    const Coefficients beta = rng.normal_matrix(2, 2);
    double best = std::numeric_limits<double>::infinity();
    oracle::for_each_permutation(6, [&](const Permutation& p) {
      best = std::min(best, (p.apply(d.y()) - d.x() * beta).squaredNorm());
    });
    const Permutation p = best_permutation_for(d, beta);
    EXPECT_NEAR((p.apply(d.y()) - d.x() * beta).squaredNorm(), best, 1e-9);
  }
}

TEST(NaiveAo, OrderedNoiselessDataConvergesImmediately) {
  Rng rng(65);
  const Matrix x = rng.normal_matrix(20, 2);
  const Matrix beta = rng.normal_matrix(2, 1);
  const Dataset d(x, x * beta);
  const SolveResult r = naive_ao(d);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.perm, Permutation::identity(20));
  EXPECT_LT((r.beta - beta).norm(), 1e-10);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_LT(r.trace.front().step, 1e-12);  // first beta update changes nothing
}

TEST(NaiveAo, ResultIsFixedPoint) {
  for (int t = 0; t < 20; ++t) {
    const SynthInstance s = generate(40, 2, 1 + t % 2, 0.05, 660 + t);
    NaiveAoConfig cfg;
    cfg.lambda = t % 2 == 0 ? 0.0 : 0.1;
    const SolveResult r = naive_ao(s.data, cfg);
    ASSERT_TRUE(r.converged);
    const Permutation p = best_permutation_for(s.data, r.beta);
    const double r0 = (r.perm.apply(s.data.y()) - s.data.x() * r.beta).squaredNorm();
    const double r1 = (p.apply(s.data.y()) - s.data.x() * r.beta).squaredNorm();
    EXPECT_NEAR(r0, r1, 1e-10 * std::max(1.0, r0));
    EXPECT_LT((ridge_solve(s.data, r.perm, cfg.lambda) - r.beta).norm(), 1e-12);
  }
}

TEST(NaiveAo, ObjectiveNonIncreasing) {
  for (int t = 0; t < 20; ++t) {
    const SynthInstance s = generate(60, 2, 1 + t % 2, 0.1, 670 + t);
    const SolveResult r = naive_ao(s.data, NaiveAoConfig{});
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      EXPECT_LE(r.trace[k].objective,
                r.trace[k - 1].objective + 1e-10 * std::max(1.0, r.trace[k - 1].objective));
    }
  }
}

TEST(NaiveAo, RestartsAreDeterministicAndNeverWorse) {
  const SynthInstance s = generate(40, 2, 1, 0.05, 680);
  NaiveAoConfig cfg;
  const SolveResult plain = naive_ao(s.data, cfg);
  cfg.restarts = 5;
  cfg.rng_seed = 9;
  const SolveResult a = naive_ao(s.data, cfg);
  const SolveResult b = naive_ao(s.data, cfg);
  EXPECT_EQ(a.perm, b.perm);
  EXPECT_EQ(a.beta, b.beta);
  auto obj = [&](const SolveResult& r) {
    return ridge_objective(s.data.x(), s.data.y(), r.perm, r.beta, 0.0);
  };
  EXPECT_LE(obj(a), obj(plain) + 1e-12);
}

TEST(NaiveAo, RejectsBadInitialCoefficients) {
  const SynthInstance s = generate(10, 2, 1, 0.0, 690);
  NaiveAoConfig cfg;
  cfg.init_beta = Matrix::Zero(3, 1);
  EXPECT_THROW(naive_ao(s.data, cfg), DimensionError);
  cfg.init_beta.reset();
  cfg.max_iters = 0;
  EXPECT_THROW(naive_ao(s.data, cfg), DataError);
}
