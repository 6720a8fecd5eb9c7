#include "tvgs/error.hpp"
#include "tvgs/sampling.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace tvgs;

namespace {

Eigen::MatrixXd ramp(Index n, Index t) {
  Eigen::MatrixXd m(n, t);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < t; ++j) m(i, j) = static_cast<double>(i * t + j);
  return m;
}

bool contains(const std::vector<Index>& v, Index x) { return std::binary_search(v.begin(), v.end(), x); }

}  // namespace

TEST(RoundHalfAway, Halves) {
  EXPECT_EQ(round_half_away(2.5), 3);
  EXPECT_EQ(round_half_away(-2.5), -3);
  EXPECT_EQ(round_half_away(2.4999), 2);
}

TEST(SamplingPlan, TableCounts) {
  const SampleCounts c = SamplingPlan::from_ratios(0.9, 0.9).counts(207, 512);
  EXPECT_EQ(c.rows, 186);
  EXPECT_EQ(c.cols, 461);
  EXPECT_EQ(c.samples, round_half_away(0.9 * 186 * 461));
}

TEST(SamplingPlan, RejectsBadRatiosAndCounts) {
  EXPECT_THROW(SamplingPlan::from_ratios(0.0, 0.5), Error);
  EXPECT_THROW(SamplingPlan::from_ratios(1.1, 0.5), Error);
  EXPECT_THROW(SamplingPlan::from_ratios(0.5, -0.1), Error);
  EXPECT_THROW(SamplingPlan::from_counts(0, 3, 3), Error);
}

TEST(SubsetSample, FullRatioSelectsEverything) {
  const Eigen::MatrixXd x = ramp(7, 9);
  const SampleSet s = subset_random_sample(x, SamplingPlan::from_ratios(1.0, 1.0), 3);
  ASSERT_EQ(s.rows.size(), 7u);
  ASSERT_EQ(s.cols.size(), 9u);
  for (Index i = 0; i < 7; ++i) EXPECT_EQ(s.rows[static_cast<std::size_t>(i)], i);
  for (Index j = 0; j < 9; ++j) EXPECT_EQ(s.cols[static_cast<std::size_t>(j)], j);
  EXPECT_EQ(s.size(), 63);
}

TEST(SubsetSample, DeterministicAndValuesMatch) {
  const Eigen::MatrixXd x = ramp(30, 40);
  const SamplingPlan plan = SamplingPlan::from_ratios(0.7, 0.6);
  const SampleSet a = subset_random_sample(x, plan, 99);
  const SampleSet b = subset_random_sample(x, plan, 99);
  EXPECT_EQ(a, b);
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_NE(a, subset_random_sample(x, plan, 100));
  EXPECT_NO_THROW(validate(a, 30, 40));
  EXPECT_EQ(a.rows.size(), 21u);
  EXPECT_EQ(a.cols.size(), 28u);
  EXPECT_EQ(a.size(), round_half_away(0.6 * 21 * 28));
  EXPECT_TRUE(std::is_sorted(a.rows.begin(), a.rows.end()));
  for (std::size_t k = 0; k < a.entries.size(); ++k) {
    EXPECT_TRUE(contains(a.rows, a.entries[k].row));
    EXPECT_TRUE(contains(a.cols, a.entries[k].col));
    EXPECT_EQ(a.values[k], x(a.entries[k].row, a.entries[k].col));
  }
}

TEST(SubsetSample, RowSelectionIsUniform) {
  // Each row is selected with probability |I| / N.
  const Eigen::MatrixXd x = ramp(10, 10);
  std::vector<int> hits(10, 0);
  const int trials = 4000;
  for (int k = 0; k < trials; ++k)
    for (Index r : subset_random_sample(x, SamplingPlan::from_ratios(0.3, 0.5), k).rows)
      ++hits[static_cast<std::size_t>(r)];
  for (int h : hits) EXPECT_NEAR(h / double(trials), 0.3, 4 * std::sqrt(0.3 * 0.7 / trials));
}

TEST(Project, Examples) {
  Eigen::MatrixXd x(2, 2);
  x << 1, 2, 3, 4;
  EXPECT_EQ(project(2, 2, full_observation(x)), x);

  SampleSet s;
  s.rows = {0, 1};
  s.cols = {0, 1};
  s.entries = {{0, 0}};
  s.values = {5};
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(2, 2);
  want(0, 0) = 5;
  EXPECT_EQ(project(2, 2, s), want);
  s.entries = {{0, 0}, {0, 0}, {0, 0}};
  s.values = {5, 5, 5};
  EXPECT_EQ(project(2, 2, s), want);
  EXPECT_EQ(s.distinct_count(), 1);
  const auto mask = sample_mask(2, 2, s);
  EXPECT_TRUE(mask(0, 0));
  EXPECT_FALSE(mask(1, 1));
}

TEST(Validate, CatchesBrokenInvariants) {
  SampleSet s;
  s.rows = {0};
  s.cols = {0, 1};
  s.entries = {{1, 0}};
  s.values = {1.0};
  EXPECT_THROW(validate(s, 2, 2), Error);  // entry outside I x J
  s.entries = {{0, 1}};
  s.values = {};
  EXPECT_THROW(validate(s, 2, 2), Error);  // values/entries length
  s.values = {1.0};
  EXPECT_NO_THROW(validate(s, 2, 2));
  EXPECT_THROW(validate(s, 1, 1), Error);  // col index out of range
  s.rows = {1, 0};
  EXPECT_THROW(validate(s, 2, 2), Error);  // unsorted
}

TEST(Lemma1Bound, Examples) {
  EXPECT_NEAR(lemma1_bound(2, 1.0, 0.1, 0.5), 3 * 2 * std::log(40.0) / 0.25, 1e-12);
  EXPECT_EQ(lemma1_min_rows(2, 1.0, 0.1, 0.5), 89);
  EXPECT_EQ(lemma1_min_rows(1, 1.0, 0.5, 0.9), 6);
  EXPECT_EQ(lemma1_min_cols(2, 1.0, 0.1, 0.5), 89);
  EXPECT_EQ(lemma1_min_rows(3, 1.0, 0.1, 0.5), 148);
}

TEST(Lemma1Bound, MonotoneInDelta) {
  Index prev = 0;
  for (double d : {0.5, 0.2, 0.1, 0.01, 0.001}) {
    const Index m = lemma1_min_rows(3, 1.3, d, 0.5);
    EXPECT_GE(m, prev);
    prev = m;
  }
}

TEST(Theorem1Bound, ExampleAndVacuousFlag) {
  // 48 * 100 * 2.6 * ln(160)^2 = 321452.218... evaluated in 40-digit arithmetic.
  const SampleBound b = theorem1_min_samples(1, 1, 1, 1, 100, 0.0, 1.5, 50, 80);
  EXPECT_NEAR(b.raw, 321452.21816, 1e-3);
  EXPECT_EQ(b.min_samples, 321453);
  EXPECT_TRUE(b.vacuous);
}

TEST(Theorem1Bound, KappaAndEtaScaling) {
  const SampleBound a = theorem1_min_samples(2, 1.2, 1.5, 1.0, 60, 0.2, 2, 40, 50);
  const SampleBound b = theorem1_min_samples(2, 1.2, 1.5, 2.0, 60, 0.2, 2, 40, 50);
  EXPECT_NEAR(b.raw / a.raw, 16.0, 1e-12);
  double prev = 0;
  for (double eta : {0.0, 0.1, 0.3, 0.6, 0.9}) {
    const double v = theorem1_min_samples(2, 1, 1, 1, 60, eta, 2, 40, 50).raw;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(RecoveryProbability, Examples) {
  // 0.81 * 0.9025 - 6 ln(1000) / 2000^2 - 1000^(2 - 2 sqrt 2)
  EXPECT_NEAR(recovery_probability(0.1, 0.05, 2.0, 1000, 1000), 0.7277434, 5e-8);
  EXPECT_LE(recovery_probability(1.0, 0.0, 2.0, 100, 100), 0.0);
  EXPECT_NEAR(recovery_probability(0.0, 0.0, 50.0, 1000, 1000), 1.0, 1e-12);
}

TEST(IncoherenceFailure, Examples) {
  EXPECT_NEAR(incoherence_failure_p(5, 0.0).p, 5.0, 1e-14);
  EXPECT_TRUE(incoherence_failure_p(5, 0.0).vacuous);
  EXPECT_NEAR(incoherence_failure_p(1, 0.7).p, 1.0, 1e-14);
  const FailureProbability f = incoherence_failure_p(16, 0.5);
  const double bracket = std::exp(-0.5) / std::sqrt(0.5);
  EXPECT_NEAR(bracket, 0.8578, 1e-4);
  EXPECT_NEAR(f.p, 16 * std::pow(bracket, std::log(16.0)), 1e-12);
  EXPECT_NEAR(f.p, 10.46, 5e-3);
  EXPECT_TRUE(f.vacuous);
}

TEST(TotalRatio, TableHeader) {
  const auto pct = [](double rc, double sub) {
    return std::round(total_ratio(SamplingPlan::from_ratios(rc, sub), 207, 512) * 1e4) / 100;
  };
  EXPECT_DOUBLE_EQ(pct(0.9, 0.9), 72.81);
  EXPECT_DOUBLE_EQ(pct(0.8, 0.8), 51.37);
  EXPECT_DOUBLE_EQ(pct(0.6, 0.6), 21.55);
}

TEST(BoundReport, ClampsAndFlags) {
  BoundInputs in;
  in.rank = 3;
  in.num_vertices = 100;
  in.num_steps = 300;
  const BoundReport r = bound_report(in);
  EXPECT_EQ(r.min_rows, 148);
  EXPECT_EQ(r.rows_used, 100);
  EXPECT_EQ(r.cols_used, 148);
  EXPECT_TRUE(r.rows_exceed_dims);
  EXPECT_NEAR(r.rank_prob, 0.81, 1e-12);
  EXPECT_TRUE(r.failure.vacuous);
  EXPECT_GE(r.recovery_prob, 0.0);
  EXPECT_LE(r.recovery_prob, 1.0);
}

TEST(Footprints, McUniformCoversEverything) {
  const Eigen::MatrixXd x = ramp(8, 12);
  const SampleSet s = mc_uniform_sample(x, 8 * 12 * 10, 5);
  EXPECT_EQ(s.touched_rows().size(), 8u);
  EXPECT_EQ(s.touched_cols().size(), 12u);
  EXPECT_NO_THROW(validate(s, 8, 12));
}

TEST(Footprints, CcsStaysOnTheCross) {
  const Eigen::MatrixXd x = ramp(20, 30);
  const CcsSample c = ccs_sample(x, SamplingPlan::from_ratios(0.3, 0.5), 8);
  EXPECT_EQ(c.cross_rows.size(), 6u);
  EXPECT_EQ(c.cross_cols.size(), 9u);
  bool off_block = false;
  for (const SampleEntry& e : c.samples.entries) {
    const bool in_r = contains(c.cross_rows, e.row);
    const bool in_c = contains(c.cross_cols, e.col);
    EXPECT_TRUE(in_r || in_c);
    off_block |= !(in_r && in_c);
  }
  EXPECT_TRUE(off_block);  // unlike the subset footprint, it leaves I x J
  EXPECT_NO_THROW(validate(c.samples, 20, 30));
}

TEST(Footprints, SubsetNeverTouchesUnselected) {
  const Eigen::MatrixXd x = ramp(20, 30);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SampleSet s = subset_random_sample(x, SamplingPlan::from_ratios(0.5, 0.8), seed);
    const std::set<Index> rows(s.rows.begin(), s.rows.end());
    const std::set<Index> cols(s.cols.begin(), s.cols.end());
    for (const SampleEntry& e : s.entries) {
      ASSERT_TRUE(rows.count(e.row));
      ASSERT_TRUE(cols.count(e.col));
    }
  }
}

TEST(SampleSetJson, RoundTripBitExact) {
  Eigen::MatrixXd x = ramp(6, 7) / 3.0;
  x(2, 3) = -1e-300;
  const SampleSet s = subset_random_sample(x, SamplingPlan::from_ratios(0.8, 0.9), 12);
  const SampleSet back = sample_set_from_json(to_json(s));
  EXPECT_EQ(s, back);
  EXPECT_THROW(sample_set_from_json("{\"seed\":1}"), Error);
  EXPECT_THROW(sample_set_from_json("not json"), Error);
}
