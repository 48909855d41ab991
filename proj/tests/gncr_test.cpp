#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "shufreg/gncr.hpp"
#include "shufreg/metrics.hpp"
#include "shufreg/rng.hpp"
#include "shufreg/synth.hpp"

using namespace shufreg;

namespace {

struct Problem {
  Dataset data;
  ObjectiveMatrices om;
  SeedSet seeds;
  SeededPartition part;
};

Problem make_problem(Index n, Index dx, Index dy, Index n_seeds, std::uint64_t seed,
                     double lambda = 0.01) {
  Rng rng(seed);
  Dataset data(rng.normal_matrix(n, dx), rng.normal_matrix(n, dy));
  ObjectiveMatrices om = objective_matrix(data.x(), lambda);
  const Permutation truth = rng.permutation(n);
  const std::vector<Index> rows = rng.sample(n, n_seeds);
  SeedSet seeds = SeedSet::from_truth(truth, rows);
  SeededPartition part = partition_seeds(data, om.L, seeds);
  return {std::move(data), std::move(om), std::move(seeds), std::move(part)};
}

/// A random point of the polytope image: a convex combination of vertices.
Matrix random_iterate(const Matrix& y_hat, Rng& rng, int vertices = 4) {
  Matrix e = Matrix::Zero(y_hat.rows(), y_hat.cols());
  double total = 0.0;
  for (int k = 0; k < vertices; ++k) {
    const double w = rng.uniform() + 0.1;
    e += w * rng.permutation(y_hat.rows()).apply(y_hat);
    total += w;
  }
  return e / total;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

/// Smallest eigenvalue of L_hat on the subspace orthogonal to the ones vector.
double centered_min_eigenvalue(const Matrix& l_hat) {
  const Index m = l_hat.rows();
  Matrix basis = oracle::centering(m);
  Eigen::HouseholderQR<Matrix> qr(basis);
  const Matrix q = qr.householderQ() * Matrix::Identity(m, m - 1);
  return oracle::eigenvalues(q.transpose() * l_hat * q).minCoeff();
}

}  // namespace

TEST(GncrConfig, Validation) {
  GncrConfig c;
  EXPECT_NO_THROW(c.validate());
  c.gamma = 1.0;
  EXPECT_THROW(c.validate(), DataError);
  c = {};
  c.mu0 = 0.0;
  EXPECT_THROW(c.validate(), DataError);
  c = {};
  c.inner_tol = 0.0;
  EXPECT_THROW(c.validate(), DataError);
  c = {};
  c.lambda = -1.0;
  EXPECT_THROW(c.validate(), DataError);
  c = {};
  c.max_inner_iters = 0;
  EXPECT_THROW(c.validate(), DataError);
}

TEST(PartitionSeeds, EmptySeedsKeepEverything) {
  const Problem p = make_problem(4, 2, 1, 0, 31);
  EXPECT_TRUE(p.part.y_hat.isApprox(p.data.y()));
  EXPECT_TRUE(p.part.l_hat.isApprox(p.om.L));
  EXPECT_EQ(p.part.y_tilde.rows(), 0);
  EXPECT_EQ(p.part.l_tilde.rows(), 0);
}

TEST(PartitionSeeds, HandComputedIndexSets) {
  Rng rng(32);
  const Dataset data(rng.normal_matrix(4, 2), rng.normal_matrix(4, 2));
  const Matrix l = objective_matrix(data.x(), 0.1).L;
  const SeedSet seeds({{0, 3}, {2, 1}});
  const SeededPartition part = partition_seeds(data, l, seeds);
  ASSERT_EQ(part.y_hat.rows(), 2);
  EXPECT_EQ(part.y_hat.row(0), data.y().row(0));
  EXPECT_EQ(part.y_hat.row(1), data.y().row(2));
  EXPECT_EQ(part.y_tilde.row(0), data.y().row(3));
  EXPECT_EQ(part.y_tilde.row(1), data.y().row(1));
  EXPECT_EQ(part.l_tilde(0, 0), l(0, 1));
  EXPECT_EQ(part.l_tilde(0, 1), l(0, 3));
  EXPECT_EQ(part.l_tilde(1, 0), l(2, 1));
  EXPECT_EQ(part.l_tilde(1, 1), l(2, 3));
  EXPECT_EQ(part.l_hat(0, 1), l(1, 3));

  const Matrix e = random_iterate(part.y_hat, rng);
  EXPECT_LT(rel(g_mu(part, e, 0.3), oracle::g_mu_full(l, data.y(), seeds, e, 0.3)), 1e-10);
}

TEST(PartitionSeeds, RejectsInvalidSeeds) {
  Rng rng(33);
  const Dataset data(rng.normal_matrix(4, 1), rng.normal_matrix(4, 1));
  const Matrix l = objective_matrix(data.x(), 0.1).L;
  EXPECT_THROW(partition_seeds(data, l, SeedSet({{0, 4}})), DataError);
  EXPECT_THROW(partition_seeds(data, Matrix::Zero(3, 3), SeedSet{}), DimensionError);
}

TEST(GMu, UnseededAtDataEqualsObjectiveValue) {
  const Problem p = make_problem(8, 2, 2, 0, 34);
  EXPECT_LT(rel(g_mu(p.part, p.part.y_hat, 0.0),
                objective_value(p.om.L, Permutation::identity(8), p.data.y())),
            1e-12);
}

TEST(GMu, CenteringTermVanishesAtBarycenter) {
  const Problem p = make_problem(9, 2, 2, 3, 35);
  const Matrix bary = Matrix::Ones(6, 1) * p.part.y_hat.colwise().mean();
  EXPECT_NEAR(g_mu(p.part, bary, 5.0), g_mu(p.part, bary, 0.0), 1e-12);
}

TEST(GMu, MatchesFullMatrixObjective) {
  Rng rng(36);
  for (int t = 0; t < 20; ++t) {
    const Problem p = make_problem(10, 2, 1 + t % 2, t % 5, 360 + t);
    const Matrix e = random_iterate(p.part.y_hat, rng);
    const double mu = rng.uniform();
    EXPECT_LT(rel(g_mu(p.part, e, mu), oracle::g_mu_full(p.om.L, p.data.y(), p.seeds, e, mu)),
              1e-10);
  }
  const Problem p = make_problem(6, 2, 1, 2, 37);
  EXPECT_THROW(g_mu(p.part, Matrix::Zero(3, 1), 0.0), DimensionError);
}

TEST(GMuGradient, MatchesFiniteDifferences) {
  Rng rng(38);
  for (int t = 0; t < 20; ++t) {
    const Problem p = make_problem(5 + t % 3, 2, 1 + t % 2, t % 3, 380 + t);
    const Index m = p.part.free_rows();
    ASSERT_EQ(m, 5);
    const Matrix d = rng.normal_matrix(m, m);
    const double mu = rng.uniform();
    auto f = [&](const Matrix& dd) { return g_mu(p.part, dd * p.part.y_hat, mu); };
    const Matrix fd = oracle::finite_difference(f, d, 1e-5);
    const Matrix grad = g_mu_gradient(p.part, d, mu);
    EXPECT_LT((grad - fd).norm(), 1e-4 * std::max(1.0, fd.norm())) << "instance " << t;
  }
}

TEST(FwLinearStep, ZeroLabelsGiveIdentity) {
  Rng rng(39);
  const Dataset data(rng.normal_matrix(5, 2), Matrix::Zero(5, 1));
  const Matrix l = objective_matrix(data.x(), 0.1).L;
  const SeededPartition part = partition_seeds(data, l, SeedSet{});
  for (bool fast : {true, false}) {
    GncrConfig cfg;
    cfg.use_fast_path = fast;
    const LinearStep s = fw_linear_step(part, part.y_hat, 0.5, cfg);
    EXPECT_EQ(s.perm, Permutation::identity(5));
  }
}

TEST(FwLinearStep, FastPathMatchesHungarian) {
  Rng rng(40);
  GncrConfig fast, exact;
  exact.use_fast_path = false;
  for (int t = 0; t < 20; ++t) {
    const Problem p = make_problem(40 + t % 4, 2, 1, t % 4, 400 + t);
    const Matrix e = random_iterate(p.part.y_hat, rng);
    const double mu = rng.uniform();
    const Matrix scores = linearization_scores(p.part, e, mu);
    const LinearStep a = fw_linear_step(p.part, e, mu, fast);
    const LinearStep b = fw_linear_step(p.part, e, mu, exact);
    const double va = (scores.array() * a.y_star.array()).sum();
    const double vb = (scores.array() * b.y_star.array()).sum();
    EXPECT_LT(std::abs(va - vb), 1e-9 * std::max(1.0, std::abs(vb)));
    EXPECT_TRUE(a.y_star.isApprox(a.perm.apply(p.part.y_hat)));
  }
}

TEST(FwLinearStep, ConcaveLocalMinimumIsFixedPoint) {
  for (int t = 0; t < 5; ++t) {
    const Problem p = make_problem(12, 2, 1 + t % 2, t % 3, 410 + t);
    const double mu = 2.0 * oracle::eigenvalues(p.part.l_hat).maxCoeff() + 1.0;
    GncrConfig cfg;
    cfg.use_fast_path = false;
    // Vertex-to-vertex descent; concavity makes each move non-increasing, so
    // it stops at a vertex whose linearization selects itself.
    Matrix v = p.part.y_hat;
    for (int k = 0; k < 1000; ++k) {
      const LinearStep s = fw_linear_step(p.part, v, mu, cfg);
      if (s.y_star == v) break;
      ASSERT_LE(g_mu(p.part, s.y_star, mu), g_mu(p.part, v, mu) + 1e-9);
      v = s.y_star;
    }
    const Permutation at = extract_permutation(p.part, v, false);
    const LinearStep s = fw_linear_step(p.part, v, mu, cfg);
    EXPECT_EQ(s.perm, at);
    EXPECT_EQ(s.y_star, v);
  }
}

TEST(LineSearch, ZeroCurvatureWhenTargetIsCurrent) {
  Rng rng(42);
  const Problem p = make_problem(10, 2, 2, 3, 42);
  const Matrix e = random_iterate(p.part.y_hat, rng);
  const LineSearchCoeffs c = line_search_coeffs(p.part, e, e, 0.7);
  const double scale = std::max(1.0, std::abs(g_mu(p.part, e, 0.7)));
  EXPECT_NEAR(c.eta2, 0.0, 1e-12 * scale);
  EXPECT_NEAR(c.eta1, 0.0, 1e-12 * scale);
}

TEST(LineSearch, QuadraticModelIsExact) {
  Rng rng(43);
  for (int t = 0; t < 30; ++t) {
    const Problem p = make_problem(12, 2, 1 + t % 2, t % 4, 430 + t);
    const Matrix e = random_iterate(p.part.y_hat, rng);
    const double mu = 2.0 * rng.uniform();
    const Matrix y_star = rng.permutation(p.part.free_rows()).apply(p.part.y_hat);
    const LineSearchCoeffs c = line_search_coeffs(p.part, e, y_star, mu);
    const double g0 = g_mu(p.part, e, mu);
    for (double a : {0.0, 0.25, 0.5, 1.0}) {
      const double lhs = g_mu(p.part, e + a * (y_star - e), mu) - g0;
      const double rhs = c.eta2 * a * a - 2.0 * c.eta1 * a;
      EXPECT_NEAR(lhs, rhs, 1e-8 * std::max(1.0, std::abs(g0))) << "instance " << t << " a=" << a;
    }
  }
}

TEST(LineSearch, CurvatureIsPsdFormWithoutRegularizer) {
  Rng rng(44);
  const Problem p = make_problem(15, 3, 1, 0, 44);
  for (int t = 0; t < 10; ++t) {
    const Matrix e = random_iterate(p.part.y_hat, rng);
    const Matrix y_star = rng.permutation(15).apply(p.part.y_hat);
    const LineSearchCoeffs c = line_search_coeffs(p.part, e, y_star, 0.0);
    const Matrix diff = y_star - e;
    EXPECT_NEAR(c.eta2, (diff.transpose() * p.part.l_hat * diff).trace(), 1e-10);
    EXPECT_GE(c.eta2, -1e-12);
  }
}

TEST(LineSearch, CurvatureNonNegativeInConvexRegime) {
  Rng rng(45);
  for (int t = 0; t < 20; ++t) {
    const Problem p = make_problem(14, 2, 1 + t % 2, t % 3, 450 + t);
    const double mu = 0.99 * centered_min_eigenvalue(p.part.l_hat);
    GncrConfig cfg;
    const Matrix e = random_iterate(p.part.y_hat, rng);
    const LinearStep s = fw_linear_step(p.part, e, std::max(mu, 0.0), cfg);
    const LineSearchCoeffs c = line_search_coeffs(p.part, e, s.y_star, std::max(mu, 0.0));
    EXPECT_GE(c.eta2, -1e-8 * std::max(1.0, (s.y_star - e).squaredNorm()));
  }
}

TEST(OptimalStep, InteriorMinimum) { EXPECT_DOUBLE_EQ(optimal_step(1.0, 2.0), 0.5); }

TEST(OptimalStep, NegativeSlopeConvexStaysPut) { EXPECT_EQ(optimal_step(-1.0, 1.0), 0.0); }

TEST(OptimalStep, ConcaveCaseComparesEndpoints) {
  // f(a) = -a^2 + 2a: f(1) = 1 > f(0) = 0.
  EXPECT_EQ(optimal_step(-1.0, -1.0), 0.0);
  // f(a) = -4a^2 + 2a: f(1) = -2 < 0.
  EXPECT_EQ(optimal_step(-1.0, -4.0), 1.0);
  // f(1) = 0 = f(0): ties go to the smaller step.
  EXPECT_EQ(optimal_step(-1.0, -2.0), 0.0);
}

TEST(OptimalStep, FlatOrConcaveWithDescentTakesFullStep) {
  EXPECT_EQ(optimal_step(1.0, 0.0), 1.0);
  EXPECT_EQ(optimal_step(1.0, -3.0), 1.0);
  EXPECT_EQ(optimal_step(3.0, 1.0), 1.0);
  EXPECT_EQ(optimal_step(-1.0, 0.0), 0.0);
  EXPECT_EQ(optimal_step(0.0, 0.0), 1.0);
}

TEST(OptimalStep, RejectsNaN) {
  EXPECT_THROW(optimal_step(std::numeric_limits<double>::quiet_NaN(), 1.0), DataError);
  EXPECT_THROW(optimal_step(1.0, std::numeric_limits<double>::quiet_NaN()), DataError);
}

TEST(OptimalStep, MatchesGridArgmin) {
  Rng rng(46);
  constexpr int kPoints = 10000;
  const double resolution = 1.0 / (kPoints - 1);
  for (int t = 0; t < 1000; ++t) {
    const double eta1 = 4.0 * rng.uniform() - 2.0;
    const double eta2 = 4.0 * rng.uniform() - 2.0;
    const double a = optimal_step(eta1, eta2);
    const double g = oracle::grid_argmin(eta1, eta2, kPoints);
    EXPECT_LE(std::abs(a - g), resolution) << eta1 << " " << eta2;
  }
}

TEST(MuSchedule, IdentityHasUnitSpectrum) {
  const MuSchedule s = mu_schedule(Matrix::Identity(6, 6), GncrConfig{});
  EXPECT_NEAR(s.mu_max, 1.0, 1e-12);
  EXPECT_FALSE(s.degenerate);
  EXPECT_NEAR(s.mu0, 1e-3, 1e-15);
  GncrConfig c;
  c.mu0 = 0.25;
  EXPECT_EQ(mu_schedule(Matrix::Identity(6, 6), c).mu0, 0.25);
}

TEST(MuSchedule, ZeroMatrixIsDegenerate) {
  Rng rng(47);
  const Matrix x = rng.normal_matrix(5, 5);
  const ObjectiveMatrices om = objective_matrix(x, 0.0);
  const MuSchedule s = mu_schedule(om.L, GncrConfig{});
  EXPECT_NEAR(s.mu_max, 0.0, 1e-10);
  EXPECT_TRUE(s.degenerate);
  GncrConfig cfg;
  cfg.lambda = 0.0;
  const SolveResult r = gncr_solve(Dataset(x, rng.normal_matrix(5, 1)), SeedSet{}, cfg);
  EXPECT_EQ(r.trace.size(), 1u);
}

TEST(MuSchedule, PowerIterationMatchesDenseEigensolver) {
  Rng rng(48);
  for (int t = 0; t < 20; ++t) {
    const Index n = 5 + static_cast<Index>(rng.below(30));
    const Matrix a = rng.normal_matrix(n, n);
    const Matrix psd = a * a.transpose();
    const double ref = oracle::eigenvalues(psd).maxCoeff();
    EXPECT_LT(std::abs(largest_eigenvalue(psd) - ref), 1e-5 * ref);
  }
  for (int t = 0; t < 10; ++t) {
    const Matrix x = rng.normal_matrix(20, 3);
    const Matrix l = objective_matrix(x, 0.5).L;
    const double ref = oracle::eigenvalues(l).maxCoeff();
    EXPECT_LT(std::abs(largest_eigenvalue(l) - ref), 1e-5 * ref);
  }
}

TEST(ExtractPermutation, IdentityAndReversal) {
  for (Index dy : {1, 2}) {
    const Problem p = make_problem(7, 2, dy, 0, 49 + dy);
    for (bool fast : {true, false}) {
      EXPECT_EQ(extract_permutation(p.part, p.part.y_hat, fast), Permutation::identity(7));
      const Permutation rev({6, 5, 4, 3, 2, 1, 0});
      EXPECT_EQ(extract_permutation(p.part, rev.apply(p.part.y_hat), fast), rev);
    }
  }
}

TEST(ExtractPermutation, RecoversPerturbedVertex) {
  Rng rng(51);
  for (int t = 0; t < 20; ++t) {
    const Problem p = make_problem(25, 2, 1 + t % 2, t % 4, 510 + t);
    const Permutation pi = rng.permutation(p.part.free_rows());
    const Matrix e = pi.apply(p.part.y_hat) + rng.normal_matrix(p.part.free_rows(), p.data.labels(), 1e-9);
    EXPECT_EQ(extract_permutation(p.part, e, true), pi);
    EXPECT_EQ(extract_permutation(p.part, e, false), pi);
  }
}

TEST(Collate, NoSeedsReturnsIterate) {
  Rng rng(52);
  const Matrix e = rng.normal_matrix(5, 2);
  EXPECT_EQ(collate(e, Matrix(0, 2), SeedSet{}), e);
}

TEST(Collate, AllSeedsReordersLabels) {
  Rng rng(53);
  const Matrix y = rng.normal_matrix(5, 1);
  const Permutation p = rng.permutation(5);
  const SeedSet seeds = SeedSet::from_truth(p, {0, 1, 2, 3, 4});
  Matrix y_tilde(5, 1);
  for (Index k = 0; k < 5; ++k) y_tilde.row(k) = y.row(seeds.y_rows()[k]);
  EXPECT_EQ(collate(Matrix(0, 1), y_tilde, seeds), p.apply(y));
}

TEST(Collate, RoundTripOfHandComputedPartition) {
  Rng rng(54);
  const Dataset data(rng.normal_matrix(4, 2), rng.normal_matrix(4, 1));
  const SeededPartition part =
      partition_seeds(data, objective_matrix(data.x(), 0.1).L, SeedSet({{0, 3}, {2, 1}}));
  const Matrix out = collate(part.y_hat, part.y_tilde, part.seeds);
  EXPECT_EQ(out.row(0), data.y().row(3));
  EXPECT_EQ(out.row(1), data.y().row(0));
  EXPECT_EQ(out.row(2), data.y().row(1));
  EXPECT_EQ(out.row(3), data.y().row(2));
  // Same as applying the assembled permutation with the identity on free rows.
  EXPECT_EQ(out, assemble_permutation(part, Permutation::identity(2)).apply(data.y()));
}

TEST(GncrSolve, AllSeedsShortCircuits) {
  const SynthInstance s = generate(10, 2, 1, 0.05, 55);
  std::vector<Index> all(10);
  std::iota(all.begin(), all.end(), Index{0});
  const SeedSet seeds = SeedSet::from_truth(s.truth_perm, all);
  GncrConfig cfg;
  cfg.lambda = 0.1;
  const SolveResult r = gncr_solve(s.data, seeds, cfg);
  EXPECT_EQ(r.perm, s.truth_perm);
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(r.beta, ridge_solve(s.data, s.truth_perm, 0.1));
}

TEST(GncrSolve, DescentAndConservationAlongTrace) {
  for (int t = 0; t < 20; ++t) {
    const Index n = 8 + 2 * t;
    const Index dy = 1 + t % 2;
    const SynthInstance s = generate(n, 2, dy, 0.01 * (t % 3), 560 + t);
    Rng rng(5600 + t);
    const SeedSet seeds = SeedSet::from_truth(s.truth_perm, rng.sample(n, t % 4));
    GncrConfig cfg;
    cfg.max_inner_iters = 100;
    const double lambda = default_lambda(s.data.x());
    const SeededPartition part =
        partition_seeds(s.data, objective_matrix(s.data.x(), lambda).L, seeds);
    const Eigen::RowVectorXd col_sums = part.y_hat.colwise().sum();

    Matrix prev_e = Matrix::Ones(part.free_rows(), 1) * part.y_hat.colwise().mean();
    int violations = 0;
    int checks = 0;
    gncr_solve(s.data, seeds, cfg, [&](double mu, int, const Matrix& e, double g) {
      const double before = g_mu(part, prev_e, mu);
      const double scale = std::max(1.0, std::abs(before));
      if (g > before + 1e-9 * scale) ++violations;
      ++checks;
      EXPECT_LT((e.colwise().sum() - col_sums).norm(), 1e-8 * std::max(1.0, col_sums.norm()));
      prev_e = e;
    });
    EXPECT_EQ(violations, 0) << "run " << t;
    EXPECT_GT(checks, 0);
  }
}

TEST(GncrSolve, SeedConsistency) {
  for (int t = 0; t < 10; ++t) {
    const SynthInstance s = generate(20, 2, 1 + t % 2, 0.05, 570 + t);
    Rng rng(5700 + t);
    const SeedSet seeds = SeedSet::from_truth(s.truth_perm, rng.sample(20, 1 + t));
    const SolveResult r = gncr_solve(s.data, seeds, GncrConfig{});
    EXPECT_TRUE(seeds.consistent_with(r.perm));
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      EXPECT_EQ(r.y_est.row(seeds.x_rows()[k]), s.data.y().row(seeds.y_rows()[k]));
    }
  }
}

TEST(GncrSolve, EndsAtVertex) {
  for (int t = 0; t < 10; ++t) {
    const SynthInstance s = generate(15 + t, 2, 1 + t % 2, 0.01, 580 + t);
    Rng rng(5800 + t);
    const SeedSet seeds = SeedSet::from_truth(s.truth_perm, rng.sample(15 + t, t % 3));
    const double lambda = default_lambda(s.data.x());
    const SeededPartition part =
        partition_seeds(s.data, objective_matrix(s.data.x(), lambda).L, seeds);
    const SolveResult r = gncr_solve(s.data, seeds, GncrConfig{});
    Matrix e(part.free_rows(), s.data.labels());
    Matrix vertex(part.free_rows(), s.data.labels());
    const Matrix py = r.perm.apply(s.data.y());
    for (Index k = 0; k < part.free_rows(); ++k) {
      e.row(k) = r.y_est.row(part.free_x[k]);
      vertex.row(k) = py.row(part.free_x[k]);
    }
    const double mu = r.trace.back().mu;
    EXPECT_LT(rel(g_mu(part, vertex, mu), g_mu(part, e, mu)), 1e-6) << "run " << t;
  }
}

TEST(GncrSolve, RecoversNoiselessInstanceWithHalfSeeded) {
  for (int t = 0; t < 5; ++t) {
    const SynthInstance s = generate(30, 2, 1, 0.0, 590 + t);
    Rng rng(5900 + t);
    const SeedSet seeds = SeedSet::from_truth(s.truth_perm, rng.sample(30, 15));
    const SolveResult r = gncr_solve(s.data, seeds, GncrConfig{});
    EXPECT_EQ(perm_overlap(r.perm, s.truth_perm), 1.0) << "run " << t;
    EXPECT_GT(beta_correlation(r.beta, s.truth_beta), 0.999999);
  }
}

TEST(GncrSolve, DeterministicAndFastPathAgnostic) {
  const SynthInstance s = generate(25, 2, 1, 0.01, 600);
  const SolveResult a = gncr_solve(s.data, SeedSet{}, GncrConfig{});
  const SolveResult b = gncr_solve(s.data, SeedSet{}, GncrConfig{});
  EXPECT_EQ(a.perm, b.perm);
  EXPECT_EQ(a.beta, b.beta);
  GncrConfig exact;
  exact.use_fast_path = false;
  const SolveResult c = gncr_solve(s.data, SeedSet{}, exact);
  EXPECT_EQ(a.perm, c.perm);
}
