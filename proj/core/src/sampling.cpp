#include "tvgs/sampling.hpp"

#include "tvgs/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>

namespace tvgs {

namespace {

using Rng = std::mt19937_64;

// First k entries of a partial Fisher-Yates shuffle of [0, n), sorted.
std::vector<Index> choose_without_replacement(Index n, Index k, Rng& rng) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<Index> all_indices(Index n) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

void check_unit_interval(double v, const char* name) {
  require(v > 0.0 && v <= 1.0, ErrorKind::InvalidInput,
          std::string(name) + " must lie in (0, 1]");
}

Index saturating_ceil(double v) {
  const double c = std::ceil(v);
  if (!(c < static_cast<double>(std::numeric_limits<Index>::max())))
    return std::numeric_limits<Index>::max();
  return static_cast<Index>(c);
}

}  // namespace

Index SampleSet::distinct_count() const {
  std::vector<SampleEntry> sorted = entries;
  std::sort(sorted.begin(), sorted.end());
  return static_cast<Index>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

std::vector<Index> SampleSet::touched_rows() const {
  std::set<Index> s;
  for (const auto& e : entries) s.insert(e.row);
  return {s.begin(), s.end()};
}

std::vector<Index> SampleSet::touched_cols() const {
  std::set<Index> s;
  for (const auto& e : entries) s.insert(e.col);
  return {s.begin(), s.end()};
}

void validate(const SampleSet& s, Index n, Index t) {
  require(s.values.size() == s.entries.size(), ErrorKind::InvalidInput,
          "sample values and entries differ in length");
  auto sorted_distinct_in = [](const std::vector<Index>& v, Index bound, const char* what) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      require(v[k] >= 0 && v[k] < bound, ErrorKind::OutOfRange,
              std::string(what) + " index " + std::to_string(v[k]) + " out of bounds");
      require(k == 0 || v[k - 1] < v[k], ErrorKind::InvalidInput,
              std::string(what) + " indices must be sorted and distinct");
    }
  };
  sorted_distinct_in(s.rows, n, "row");
  sorted_distinct_in(s.cols, t, "column");
  for (const auto& e : s.entries) {
    require(e.row >= 0 && e.row < n && e.col >= 0 && e.col < t, ErrorKind::OutOfRange,
            "sample (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                ") out of bounds");
    require(std::binary_search(s.rows.begin(), s.rows.end(), e.row) &&
                std::binary_search(s.cols.begin(), s.cols.end(), e.col),
            ErrorKind::InvalidInput, "sample outside the selected rows/columns");
  }
}

Index round_half_away(double v) { return static_cast<Index>(std::llround(v)); }

SamplingPlan SamplingPlan::from_ratios(double rho_rc, double rho_sub) {
  check_unit_interval(rho_rc, "rho_rc");
  check_unit_interval(rho_sub, "rho_sub");
  SamplingPlan p;
  p.uses_ratios_ = true;
  p.rho_rc_ = rho_rc;
  p.rho_sub_ = rho_sub;
  return p;
}

SamplingPlan SamplingPlan::from_counts(Index rows, Index cols, Index samples) {
  require(rows >= 1 && cols >= 1 && samples >= 1, ErrorKind::InvalidInput,
          "explicit sample counts must be >= 1");
  SamplingPlan p;
  p.uses_ratios_ = false;
  p.explicit_ = {rows, cols, samples};
  return p;
}

SampleCounts SamplingPlan::counts(Index n, Index t) const {
  SampleCounts c = explicit_;
  if (uses_ratios_) {
    c.rows = round_half_away(rho_rc_ * static_cast<double>(n));
    c.cols = round_half_away(rho_rc_ * static_cast<double>(t));
    c.samples = round_half_away(rho_sub_ * static_cast<double>(c.rows) * static_cast<double>(c.cols));
  }
  require(c.rows >= 1 && c.cols >= 1 && c.samples >= 1, ErrorKind::InvalidInput,
          "plan yields an empty row set, column set or sample set");
  require(c.rows <= n, ErrorKind::InvalidInput,
          "requested " + std::to_string(c.rows) + " rows of " + std::to_string(n));
  require(c.cols <= t, ErrorKind::InvalidInput,
          "requested " + std::to_string(c.cols) + " columns of " + std::to_string(t));
  return c;
}

SampleSet subset_random_sample(const Eigen::MatrixXd& x, const SamplingPlan& plan,
                               std::uint64_t seed) {
  const SampleCounts c = plan.counts(x.rows(), x.cols());
  Rng rng(seed);

  SampleSet s;
  s.seed = seed;
  s.rows = choose_without_replacement(x.rows(), c.rows, rng);
  s.cols = choose_without_replacement(x.cols(), c.cols, rng);
  s.entries.reserve(static_cast<std::size_t>(c.samples));
  s.values.reserve(static_cast<std::size_t>(c.samples));
  std::uniform_int_distribution<Index> pick_row(0, c.rows - 1);
  std::uniform_int_distribution<Index> pick_col(0, c.cols - 1);
  for (Index k = 0; k < c.samples; ++k) {
    const Index i = s.rows[static_cast<std::size_t>(pick_row(rng))];
    const Index j = s.cols[static_cast<std::size_t>(pick_col(rng))];
    s.entries.push_back({i, j});
    s.values.push_back(x(i, j));
  }
  return s;
}

SampleSet mc_uniform_sample(const Eigen::MatrixXd& x, Index count, std::uint64_t seed) {
  require(count >= 1, ErrorKind::InvalidInput, "sample count must be >= 1");
  require(x.size() > 0, ErrorKind::InvalidInput, "empty matrix");
  Rng rng(seed);
  SampleSet s;
  s.seed = seed;
  s.rows = all_indices(x.rows());
  s.cols = all_indices(x.cols());
  std::uniform_int_distribution<Index> pick_row(0, x.rows() - 1);
  std::uniform_int_distribution<Index> pick_col(0, x.cols() - 1);
  for (Index k = 0; k < count; ++k) {
    const Index i = pick_row(rng);
    const Index j = pick_col(rng);
    s.entries.push_back({i, j});
    s.values.push_back(x(i, j));
  }
  return s;
}

SampleSet full_observation(const Eigen::MatrixXd& x) {
  require(x.size() > 0, ErrorKind::InvalidInput, "empty matrix");
  SampleSet s;
  s.rows = all_indices(x.rows());
  s.cols = all_indices(x.cols());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) {
      s.entries.push_back({i, j});
      s.values.push_back(x(i, j));
    }
  return s;
}

CcsSample ccs_sample(const Eigen::MatrixXd& x, const SamplingPlan& plan, std::uint64_t seed) {
  require(plan.uses_ratios(), ErrorKind::InvalidInput, "CCS sampling needs a ratio plan");
  const Index n = x.rows();
  const Index t = x.cols();
  const Index nr = round_half_away(plan.rho_rc() * static_cast<double>(n));
  const Index nc = round_half_away(plan.rho_rc() * static_cast<double>(t));
  require(nr >= 1 && nc >= 1, ErrorKind::InvalidInput, "plan selects no rows or columns");

  Rng rng(seed);
  CcsSample out;
  out.cross_rows = choose_without_replacement(n, nr, rng);
  out.cross_cols = choose_without_replacement(t, nc, rng);

  std::vector<Index> other_rows;
  for (Index i = 0; i < n; ++i)
    if (!std::binary_search(out.cross_rows.begin(), out.cross_rows.end(), i)) other_rows.push_back(i);

  // Cells of the cross: full selected rows first, then the selected columns
  // restricted to the remaining rows.
  const Index row_cells = nr * t;
  const Index cross = row_cells + static_cast<Index>(other_rows.size()) * nc;
  const Index count = round_half_away(plan.rho_sub() * static_cast<double>(cross));
  require(count >= 1, ErrorKind::InvalidInput, "sample count must be >= 1");

  SampleSet& s = out.samples;
  s.seed = seed;
  s.rows = all_indices(n);
  s.cols = all_indices(t);
  std::uniform_int_distribution<Index> pick(0, cross - 1);
  for (Index k = 0; k < count; ++k) {
    const Index cell = pick(rng);
    Index i, j;
    if (cell < row_cells) {
      i = out.cross_rows[static_cast<std::size_t>(cell / t)];
      j = cell % t;
    } else {
      const Index rest = cell - row_cells;
      i = other_rows[static_cast<std::size_t>(rest / nc)];
      j = out.cross_cols[static_cast<std::size_t>(rest % nc)];
    }
    s.entries.push_back({i, j});
    s.values.push_back(x(i, j));
  }
  return out;
}

Eigen::MatrixXd project(Index n, Index t, const SampleSet& s) {
  validate(s, n, t);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, t);
  for (std::size_t k = 0; k < s.entries.size(); ++k)
    out(s.entries[k].row, s.entries[k].col) = s.values[k];
  return out;
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> sample_mask(Index n, Index t,
                                                                 const SampleSet& s) {
  validate(s, n, t);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> m =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, t, false);
  for (const auto& e : s.entries) m(e.row, e.col) = true;
  return m;
}

double total_ratio(const SamplingPlan& plan, Index n, Index t) {
  const SampleCounts c = plan.counts(n, t);
  return static_cast<double>(c.samples) / (static_cast<double>(n) * static_cast<double>(t));
}

double lemma1_bound(Index r, double mu, double delta, double epsilon) {
  require(r >= 1, ErrorKind::InvalidInput, "rank must be >= 1");
  require(mu >= 1.0, ErrorKind::InvalidInput, "incoherence must be >= 1");
  require(delta > 0.0 && delta < 1.0, ErrorKind::InvalidInput, "delta must lie in (0, 1)");
  require(epsilon > 0.0 && epsilon < 1.0, ErrorKind::InvalidInput, "epsilon must lie in (0, 1)");
  const auto rr = static_cast<double>(r);
  return 3.0 * rr * mu * std::log(2.0 * rr / delta) / (epsilon * epsilon);
}

Index lemma1_min_rows(Index r, double mu1, double delta, double epsilon) {
  return saturating_ceil(lemma1_bound(r, mu1, delta, epsilon));
}

Index lemma1_min_cols(Index r, double mu2, double delta, double epsilon) {
  return saturating_ceil(lemma1_bound(r, mu2, delta, epsilon));
}

SampleBound theorem1_min_samples(Index r, double mu1, double mu2, double kappa,
                                 Index num_vertices, double eta, double beta, Index rows,
                                 Index cols) {
  require(r >= 1, ErrorKind::InvalidInput, "rank must be >= 1");
  require(mu1 >= 1.0 && mu2 >= 1.0, ErrorKind::InvalidInput, "incoherence must be >= 1");
  require(kappa >= 1.0, ErrorKind::InvalidInput, "condition number must be >= 1");
  require(num_vertices >= 1, ErrorKind::InvalidInput, "N must be >= 1");
  require(eta >= 0.0 && eta < 1.0, ErrorKind::InvalidInput, "eta must lie in [0, 1)");
  require(beta > 1.0, ErrorKind::InvalidInput, "beta must exceed 1");
  require(rows >= 1 && cols >= 1, ErrorKind::InvalidInput, "rows and cols must be >= 1");

  const auto rr = static_cast<double>(r);
  const auto nr = static_cast<double>(rows);
  const auto nc = static_cast<double>(cols);
  const double n = std::max(nr, nc);
  const double log2n = std::log(2.0 * n);
  const double k2 = kappa * kappa;
  const double one_minus_eta = 1.0 - eta;

  SampleBound b;
  b.raw = 32.0 * beta * k2 * k2 * rr * rr * static_cast<double>(num_vertices) /
          (one_minus_eta * one_minus_eta * one_minus_eta) * mu1 * mu2 * (nr + nc) / nr * log2n *
          log2n;
  b.min_samples = saturating_ceil(b.raw);
  b.vacuous = b.raw > nr * nc;
  return b;
}

FailureProbability incoherence_failure_p(Index r, double eta) {
  require(r >= 1, ErrorKind::InvalidInput, "rank must be >= 1");
  require(eta >= 0.0 && eta < 1.0, ErrorKind::InvalidInput, "eta must lie in [0, 1)");
  const auto rr = static_cast<double>(r);
  const double bracket = std::exp(-eta) / std::pow(1.0 - eta, 1.0 - eta);
  FailureProbability f;
  f.p = rr * std::pow(bracket, std::log(rr));
  f.vacuous = f.p >= 1.0;
  return f;
}

double recovery_probability(double delta, double p, double beta, Index rows, Index cols) {
  const auto nr = static_cast<double>(rows);
  const auto nc = static_cast<double>(cols);
  const double n = std::max(nr, nc);
  const double a = (1.0 - delta) * (1.0 - delta) * (1.0 - p) * (1.0 - p);
  return a - 6.0 * std::log(n) / std::pow(nr + nc, 2.0 * beta - 2.0) -
         std::pow(n, 2.0 - 2.0 * std::sqrt(beta));
}

BoundReport bound_report(const BoundInputs& in) {
  BoundReport rep;
  rep.inputs = in;
  rep.min_rows = lemma1_min_rows(in.rank, in.mu1, in.delta, in.epsilon);
  rep.min_cols = lemma1_min_cols(in.rank, in.mu2, in.delta, in.epsilon);
  rep.rows_exceed_dims = rep.min_rows > in.num_vertices || rep.min_cols > in.num_steps;
  rep.rows_used = in.rows > 0 ? in.rows : std::min(rep.min_rows, in.num_vertices);
  rep.cols_used = in.cols > 0 ? in.cols : std::min(rep.min_cols, in.num_steps);
  rep.samples = theorem1_min_samples(in.rank, in.mu1, in.mu2, in.kappa, in.num_vertices, in.eta,
                                     in.beta, rep.rows_used, rep.cols_used);
  rep.rank_prob = (1.0 - in.delta) * (1.0 - in.delta);
  rep.failure = incoherence_failure_p(in.rank, in.eta);
  rep.incoherence_prob_raw = (1.0 - rep.failure.p) * (1.0 - rep.failure.p);
  // (1 - p)^2 grows again past p = 1; a vacuous p certifies nothing.
  rep.incoherence_prob = rep.failure.vacuous ? 0.0 : std::clamp(rep.incoherence_prob_raw, 0.0, 1.0);
  rep.recovery_prob_raw = recovery_probability(in.delta, std::min(rep.failure.p, 1.0), in.beta,
                                               rep.rows_used, rep.cols_used);
  rep.recovery_prob = std::clamp(rep.recovery_prob_raw, 0.0, 1.0);
  rep.recovery_vacuous = rep.recovery_prob_raw <= 0.0 || rep.recovery_prob_raw > 1.0;
  return rep;
}

}  // namespace tvgs
