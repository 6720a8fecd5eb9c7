#include "tvgs/error.hpp"
#include "tvgs/evaluation.hpp"
#include "tvgs/reconstruction.hpp"
#include "tvgs/sampling.hpp"
#include "tvgs/signal_model.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace tvgs;

namespace {

Eigen::MatrixXd gaussian(Index n, Index t, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(n, t);
  for (Index j = 0; j < t; ++j)
    for (Index i = 0; i < n; ++i) m(i, j) = nd(rng);
  return m;
}

// Samples every entry of `known` exactly once.
SampleSet observe(const Eigen::MatrixXd& x, const BoolMatrix& known) {
  SampleSet s;
  for (Index i = 0; i < x.rows(); ++i) s.rows.push_back(i);
  for (Index j = 0; j < x.cols(); ++j) s.cols.push_back(j);
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j)
      if (known(i, j)) {
        s.entries.push_back({i, j});
        s.values.push_back(x(i, j));
      }
  return s;
}

struct Operators {
  GraphOperators ops;
  TimeOperators tops;
};

Operators make_setup(const VertexGraph& g, Index t) {
  return {build_operators(g), build_time_operators(TimeHorizon{t})};
}

}  // namespace

TEST(Observations, CollapsesDuplicatesAndRejectsConflicts) {
  SampleSet s;
  s.rows = {0, 1};
  s.cols = {0, 1};
  s.entries = {{0, 1}, {0, 1}, {1, 0}};
  s.values = {2.0, 2.0, -1.0};
  const Observations o = collect_observations(s, 2, 2);
  EXPECT_EQ(o.count, 2);
  EXPECT_EQ(o.values(0, 1), 2.0);
  s.values = {2.0, 3.0, -1.0};
  EXPECT_THROW(collect_observations(s, 2, 2), Error);
}

TEST(SingularValueShrink, ZeroThresholdIsIdentityAndShrinksBySvd) {
  const Eigen::MatrixXd m = gaussian(6, 9, 1);
  EXPECT_LT((singular_value_shrink(m, 0.0) - m).norm(), 1e-12);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double tau = svd.singularValues()(2);
  const Eigen::VectorXd s = (svd.singularValues().array() - tau).max(0.0);
  const Eigen::MatrixXd want = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  EXPECT_LT((singular_value_shrink(m, tau) - want).norm(), 1e-10);
}

TEST(LogSurrogate, EqualsSpectralFunctionOfGram) {
  const Eigen::MatrixXd x = gaussian(7, 11, 2);
  // X^T X and X X^T share their nonzero eigenvalues; the smaller Gram avoids
  // sqrt() of rounding noise in the zero eigenvalues, which contribute g(0) = 0.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x * x.transpose());
  double want = 0;
  for (Index k = 0; k < es.eigenvalues().size(); ++k)
    want += std::log(std::sqrt(std::max(es.eigenvalues()(k), 0.0)) + 1);
  EXPECT_NEAR(log_surrogate(x), want, 1e-8);
}

TEST(SolveJoint, FullObservationIsExact) {
  const Operators st = make_setup(cycle_graph(10), 12);
  const Eigen::MatrixXd x = gaussian(10, 12, 3);
  const ReconstructionResult r = solve_joint(full_observation(x), st.ops, st.tops);
  EXPECT_EQ(r.x_hat, x);
  EXPECT_EQ(r.max_constraint_violation, 0.0);
  EXPECT_EQ(r.error_matrix.norm(), 0.0);
}

TEST(SolveJoint, AllZeroObservationsGiveZero) {
  const Operators st = make_setup(cycle_graph(8), 9);
  const SampleSet s = subset_random_sample(Eigen::MatrixXd::Zero(8, 9),
                                           SamplingPlan::from_ratios(0.7, 0.6), 4);
  const ReconstructionResult r = solve_joint(s, st.ops, st.tops);
  EXPECT_EQ(r.x_hat.norm(), 0.0);
  EXPECT_TRUE(r.converged);
}

TEST(SolveJoint, RankOneRecoveryMonotoneTrace) {
  const VertexGraph g = cycle_graph(20);
  const Operators st = make_setup(g, 30);
  std::vector<double> errs;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd x = synth_signal(st.ops, st.tops, SynthSpec{1, 3, 3}, mix_seed(5, seed));
    const SampleSet s =
        subset_random_sample(x, SamplingPlan::from_ratios(0.9, 0.8), mix_seed(6, seed));
    const ReconstructionResult r = solve_joint(s, st.ops, st.tops);
    errs.push_back(nrmse(x, r.x_hat));
    EXPECT_LE(r.max_constraint_violation, 1e-12);
    for (std::size_t k = 2; k < r.objective_trace.size(); ++k)
      EXPECT_LE(r.objective_trace[k], r.objective_trace[k - 1] * (1 + 1e-12));
  }
  EXPECT_LE(median(errs), 1e-2);
}

TEST(SolveJoint, ErrorMatrixDefinition) {
  const Operators st = make_setup(cycle_graph(6), 7);
  const Eigen::MatrixXd x = gaussian(6, 1, 1) * gaussian(1, 7, 2);
  const SampleSet s = subset_random_sample(x, SamplingPlan::from_ratios(0.9, 0.8), 3);
  const ReconstructionResult r = solve_joint(s, st.ops, st.tops);
  const BoolMatrix m = sample_mask(6, 7, s);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 7; ++j) {
      if (m(i, j)) {
        EXPECT_EQ(r.error_matrix(i, j), 0.0);
      } else {
        EXPECT_EQ(r.error_matrix(i, j), -r.x_hat(i, j));
      }
    }
}

TEST(CompleteSubmatrix, FullyObservedBlockIsReturned) {
  const Eigen::MatrixXd x = gaussian(9, 11, 4);
  const SampleSet s = subset_random_sample(x, SamplingPlan::from_counts(5, 6, 1000), 8);
  const Eigen::MatrixXd block = complete_submatrix(s);
  ASSERT_EQ(block.rows(), 5);
  ASSERT_EQ(block.cols(), 6);
  if (s.distinct_count() == 30) {
    for (Index a = 0; a < 5; ++a)
      for (Index b = 0; b < 6; ++b)
        EXPECT_EQ(block(a, b), x(s.rows[std::size_t(a)], s.cols[std::size_t(b)]));
  }
}

TEST(CompleteSubmatrix, SingleEntryMinimumNuclearNorm) {
  // Any rank-1 completion [[a, b], [c, bc/a]] has nuclear norm >= |a|, with
  // equality only at b = c = 0.
  SampleSet s;
  s.rows = {0, 1};
  s.cols = {0, 1};
  s.entries = {{0, 0}};
  s.values = {3.0};
  const Eigen::MatrixXd z = complete_submatrix(s);
  EXPECT_NEAR(z(0, 0), 3.0, 1e-12);
  EXPECT_NEAR(z(0, 1), 0.0, 1e-6);
  EXPECT_NEAR(z(1, 0), 0.0, 1e-6);
  EXPECT_NEAR(z(1, 1), 0.0, 1e-6);
}

TEST(CompleteSubmatrix, RankOneAtSixtyPercent) {
  std::vector<double> errs;
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd x = gaussian(30, 1, 100 + seed) * gaussian(1, 40, 200 + seed);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution keep(0.6);
    BoolMatrix known(30, 40);
    for (Index i = 0; i < 30; ++i)
      for (Index j = 0; j < 40; ++j) known(i, j) = keep(rng);
    const Eigen::MatrixXd z = complete_submatrix(observe(x, known));
    errs.push_back((z - x).norm() / x.norm());
  }
  EXPECT_LE(median(errs), 1e-3);
}

TEST(TvObjective, GradientMatchesCentralDifferences) {
  const VertexGraph g(5, {{0, 1, 0.5}, {1, 2, 2.0}, {2, 3, 1.5}, {3, 4, 0.25}, {0, 3, 3.0}});
  const GraphOperators ops = build_operators(g);
  const Eigen::MatrixXd x = gaussian(5, 6, 9);
  for (double a : {0.05, 1.0}) {
    Eigen::MatrixXd grad;
    tv_objective(x, ops, a, grad);
    Eigen::MatrixXd fd(5, 6);
    const double h = 1e-6;
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 6; ++j) {
        Eigen::MatrixXd p = x, m = x;
        p(i, j) += h;
        m(i, j) -= h;
        fd(i, j) = (tv_objective(p, ops, a) - tv_objective(m, ops, a)) / (2 * h);
      }
    EXPECT_LT((grad - fd).norm() / fd.norm(), 1e-5) << "a = " << a;
  }
}

TEST(TvObjective, ValueMatchesDefinition) {
  const GraphOperators ops = build_operators(path_graph(2));
  Eigen::MatrixXd x(2, 2);
  x << 1, 3, 0, 1;
  const double a = 0.5;
  // (0,0): graph 1, time 2; (0,1): graph 2; (1,0): graph 1, time 1; (1,1): graph 2.
  const double want = std::sqrt(1 + 4 + a * a) + std::sqrt(4 + a * a) + std::sqrt(1 + 1 + a * a) +
                      std::sqrt(4 + a * a);
  EXPECT_NEAR(tv_objective(x, ops, a), want, 1e-14);
}

TEST(TvInpaint, ConstantKnownBlockExtendsConstant) {
  const Operators st = make_setup(cycle_graph(7), 9);
  Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(7, 9);
  const std::vector<Index> rows{1, 2, 5}, cols{0, 3, 4, 8};
  for (Index i : rows)
    for (Index j : cols) partial(i, j) = 2.5;
  const ReconstructionResult r = tv_inpaint(partial, rows, cols, st.ops, st.tops);
  EXPECT_LT((r.x_hat.array() - 2.5).abs().maxCoeff(), 1e-9);
}

TEST(TvInpaint, LinearRampOnOneVertex) {
  const Operators st = make_setup(VertexGraph(1, {}), 5);
  Eigen::MatrixXd partial(1, 5);
  partial << 0, 0, 2, 0, 4;
  const ReconstructionResult r = tv_inpaint(partial, {0}, {0, 2, 4}, st.ops, st.tops);
  EXPECT_NEAR(r.x_hat(0, 1), 1.0, 1e-3);
  EXPECT_NEAR(r.x_hat(0, 3), 3.0, 1e-3);
  EXPECT_EQ(r.x_hat(0, 2), 2.0);
}

TEST(TvInpaint, TwoRowPathPullsUnknownRowTowardsKnown) {
  // The unknown row couples to the known row through the single edge; its
  // own temporal term also pulls it flat at the boundaries, so the match is
  // close but not exact.
  const Operators st = make_setup(path_graph(2), 12);
  Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(2, 12);
  for (Index j = 0; j < 12; ++j) partial(0, j) = std::sin(0.3 * j);
  std::vector<Index> cols(12);
  std::iota(cols.begin(), cols.end(), 0);
  const ReconstructionResult r = tv_inpaint(partial, {0}, cols, st.ops, st.tops);
  EXPECT_LT((r.x_hat.row(1) - r.x_hat.row(0)).norm() / r.x_hat.row(0).norm(), 0.1);
  for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
    EXPECT_LE(r.objective_trace[k], r.objective_trace[k - 1]);
}

TEST(TwoStage, FullRowColumnRatioMatchesCompletion) {
  const Operators st = make_setup(cycle_graph(12), 14);
  const Eigen::MatrixXd x = gaussian(12, 2, 5) * gaussian(2, 14, 6);
  const SampleSet s = subset_random_sample(x, SamplingPlan::from_ratios(1.0, 0.8), 3);
  const ReconstructionResult r = two_stage_reconstruct(s, st.ops, st.tops);
  EXPECT_LT((r.x_hat - complete_submatrix(s)).norm(), 1e-9 * x.norm());
}

TEST(TwoStage, ConstantMatrixRecovered) {
  const Operators st = make_setup(cycle_graph(10), 13);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Constant(10, 13, -1.75);
  for (const auto& [rc, sub] : {std::pair{0.6, 0.9}, std::pair{0.8, 0.7}, std::pair{1.0, 0.8}})
    for (std::uint64_t seed = 20; seed < 25; ++seed) {
      const SampleSet s = subset_random_sample(x, SamplingPlan::from_ratios(rc, sub), seed);
      const ReconstructionResult r = two_stage_reconstruct(s, st.ops, st.tops);
      EXPECT_LT((r.x_hat - x).cwiseAbs().maxCoeff(), 1e-6) << rc << "/" << sub << " seed " << seed;
    }
}

TEST(CompleteSubmatrix, NuclearNormNeverAboveTruth) {
  // Too sparse for exact recovery (18 of 48 block entries), yet the
  // completion is still the nuclear-norm minimizer: it beats the truth.
  const Eigen::MatrixXd x = Eigen::MatrixXd::Constant(10, 13, -1.75);
  const SampleSet s = subset_random_sample(x, SamplingPlan::from_ratios(0.6, 0.5), 21);
  const Eigen::MatrixXd z = complete_submatrix(s);
  const double truth = 1.75 * std::sqrt(double(z.size()));
  const double got = Eigen::JacobiSVD<Eigen::MatrixXd>(z).singularValues().sum();
  EXPECT_LE(got, truth + 1e-9);
  for (std::size_t k = 0; k < s.entries.size(); ++k) {
    const auto a = std::lower_bound(s.rows.begin(), s.rows.end(), s.entries[k].row) - s.rows.begin();
    const auto b = std::lower_bound(s.cols.begin(), s.cols.end(), s.entries[k].col) - s.cols.begin();
    EXPECT_NEAR(z(a, b), s.values[k], 1e-9);
  }
}

TEST(TwoStage, SmoothRankTwoRecovery) {
  const VertexGraph g = random_geometric_graph(60, 5, 7);
  const Operators st = make_setup(g, 80);
  std::vector<double> errs;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd x = synth_signal(st.ops, st.tops, SynthSpec{2, 3, 3}, mix_seed(1, seed));
    const SampleSet s =
        subset_random_sample(x, SamplingPlan::from_ratios(0.8, 0.7), mix_seed(2, seed));
    errs.push_back(nrmse(x, two_stage_reconstruct(s, st.ops, st.tops).x_hat));
  }
  EXPECT_LE(median(errs), 0.05);
}

TEST(Svt, RankOneUniformSampling) {
  std::vector<double> errs;
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd x = gaussian(20, 1, 300 + seed) * gaussian(1, 30, 400 + seed);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution keep(0.7);
    BoolMatrix known(20, 30);
    for (Index i = 0; i < 20; ++i)
      for (Index j = 0; j < 30; ++j) known(i, j) = keep(rng);
    const ReconstructionResult r = svt_baseline(observe(x, known), 20, 30);
    errs.push_back((r.x_hat - x).norm() / x.norm());
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
      EXPECT_LE(r.objective_trace[k], r.objective_trace[k - 1] * (1 + 1e-12));
  }
  EXPECT_LE(median(errs), 1e-2);
}

TEST(Tnnr, FullObservationWithMatchingTruncationReturnsInput) {
  const Eigen::MatrixXd x = gaussian(15, 3, 7) * gaussian(3, 18, 8);
  TnnrConfig cfg;
  cfg.trunc_rank = 3;
  const ReconstructionResult r = tnnr_baseline(full_observation(x), 15, 18, cfg);
  EXPECT_LT((r.x_hat - x).norm() / x.norm(), 1e-12);
  EXPECT_LE(r.max_constraint_violation, 1e-12);
}

TEST(Baselines, RejectFrameMismatch) {
  const Eigen::MatrixXd x = gaussian(4, 5, 1);
  EXPECT_THROW(svt_baseline(full_observation(x), 3, 5), Error);
  EXPECT_THROW(tnnr_baseline(full_observation(x), 4, 4), Error);
  SvtConfig bad;
  bad.step = 1.5;
  EXPECT_THROW(svt_baseline(full_observation(x), 4, 5, bad), Error);
}
