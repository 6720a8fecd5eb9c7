#pragma once

// Subset random sampling of an N x T signal, the comparison footprints
// (uniform matrix-completion sampling and cross-concentrated sampling), and
// the closed-form sample-complexity bounds with their success probabilities.

#include "tvgs/graph_core.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tvgs {

struct SampleEntry {
  Index row = 0;
  Index col = 0;

  friend bool operator==(const SampleEntry&, const SampleEntry&) = default;
  friend auto operator<=>(const SampleEntry&, const SampleEntry&) = default;
};

/// Output of a sampler. `rows`/`cols` are the candidate index sets (sorted,
/// distinct); `entries` are with-replacement draws inside rows x cols and
/// `values[k]` is the observation at `entries[k]`.
struct SampleSet {
  std::uint64_t seed = 0;
  std::vector<Index> rows;
  std::vector<Index> cols;
  std::vector<SampleEntry> entries;
  std::vector<double> values;

  Index size() const noexcept { return static_cast<Index>(entries.size()); }
  Index distinct_count() const;
  std::vector<Index> touched_rows() const;
  std::vector<Index> touched_cols() const;

  friend bool operator==(const SampleSet&, const SampleSet&) = default;
};

/// Throws InvalidInput/OutOfRange if any invariant of SampleSet fails for an
/// n x t signal.
void validate(const SampleSet& s, Index n, Index t);

/// Nearest integer, halves rounded away from zero.
Index round_half_away(double v);

struct SampleCounts {
  Index rows = 0;
  Index cols = 0;
  Index samples = 0;
};

class SamplingPlan {
 public:
  /// |I| = Round(rho_rc N), |J| = Round(rho_rc T), |S| = Round(rho_sub |I||J|).
  static SamplingPlan from_ratios(double rho_rc, double rho_sub);
  static SamplingPlan from_counts(Index rows, Index cols, Index samples);

  SampleCounts counts(Index n, Index t) const;

  bool uses_ratios() const noexcept { return uses_ratios_; }
  double rho_rc() const noexcept { return rho_rc_; }
  double rho_sub() const noexcept { return rho_sub_; }

 private:
  bool uses_ratios_ = true;
  double rho_rc_ = 1.0;
  double rho_sub_ = 1.0;
  SampleCounts explicit_{};
};

/// Procedure: rows I and columns J uniformly without replacement, then |S|
/// entries uniformly with replacement from I x J.
SampleSet subset_random_sample(const Eigen::MatrixXd& x, const SamplingPlan& plan,
                               std::uint64_t seed);

/// Uniform with-replacement draws over the whole matrix.
SampleSet mc_uniform_sample(const Eigen::MatrixXd& x, Index count, std::uint64_t seed);

struct CcsSample {
  SampleSet samples;              // rows/cols span the full matrix
  std::vector<Index> cross_rows;  // fully eligible rows
  std::vector<Index> cross_cols;  // fully eligible columns
};

/// Cross-concentrated footprint: Round(rho_rc N) rows and Round(rho_rc T)
/// columns are made eligible in full; Round(rho_sub |cross|) entries are drawn
/// with replacement from the union of those rows and columns.
CcsSample ccs_sample(const Eigen::MatrixXd& x, const SamplingPlan& plan, std::uint64_t seed);

/// Every entry observed exactly once (I, J complete); seed 0.
SampleSet full_observation(const Eigen::MatrixXd& x);

/// P_S: observed values at sampled positions, zero elsewhere.
Eigen::MatrixXd project(Index n, Index t, const SampleSet& s);
/// Boolean mask of sampled positions.
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> sample_mask(Index n, Index t,
                                                                 const SampleSet& s);

/// |S| / (N T) for the counts a plan produces.
double total_ratio(const SamplingPlan& plan, Index n, Index t);

// --- sample-complexity bounds -------------------------------------------

/// 3 r mu ln(2r/delta) / eps^2, before the ceiling.
double lemma1_bound(Index r, double mu, double delta, double epsilon);
/// Minimum |I| so that rank(X_R) = r with probability >= 1 - delta.
Index lemma1_min_rows(Index r, double mu1, double delta, double epsilon);
/// Minimum |J|; same formula with mu2.
Index lemma1_min_cols(Index r, double mu2, double delta, double epsilon);

struct SampleBound {
  double raw = 0.0;       // before the ceiling
  Index min_samples = 0;  // ceil(raw), saturated at the Index range
  bool vacuous = false;   // raw exceeds rows * cols
};

/// 32 beta kappa^4 r^2 N mu1 mu2 (rows + cols) / rows * ln^2(2n) / (1 - eta)^3,
/// n = max(rows, cols).
SampleBound theorem1_min_samples(Index r, double mu1, double mu2, double kappa,
                                 Index num_vertices, double eta, double beta, Index rows,
                                 Index cols);

struct FailureProbability {
  double p = 0.0;
  bool vacuous = false;  // p >= 1: the (1 - p)^2 floor carries no information
};

/// p = r [exp(-eta) / (1 - eta)^(1 - eta)]^(ln r).
FailureProbability incoherence_failure_p(Index r, double eta);

/// (1-delta)^2 (1-p)^2 - 6 ln n / (rows+cols)^(2 beta - 2) - n^(2 - 2 sqrt(beta)),
/// evaluated verbatim (may be negative).
double recovery_probability(double delta, double p, double beta, Index rows, Index cols);

struct BoundInputs {
  Index rank = 1;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double kappa = 1.0;
  Index num_vertices = 1;
  Index num_steps = 1;
  double delta = 0.1;
  double epsilon = 0.5;
  double eta = 0.0;
  double beta = 2.0;
  Index rows = 0;  // 0: use the lemma minimum (clamped to N)
  Index cols = 0;  // 0: use the lemma minimum (clamped to T)
};

struct BoundReport {
  BoundInputs inputs;
  Index min_rows = 0;
  Index min_cols = 0;
  Index rows_used = 0;
  Index cols_used = 0;
  SampleBound samples;
  double rank_prob = 0.0;              // (1 - delta)^2
  FailureProbability failure;          // p of the incoherence step
  double incoherence_prob_raw = 0.0;   // (1 - p)^2
  double incoherence_prob = 0.0;       // clamped to [0, 1]
  double recovery_prob_raw = 0.0;
  double recovery_prob = 0.0;          // clamped to [0, 1]
  bool recovery_vacuous = false;       // raw recovery probability outside [0, 1]
  bool rows_exceed_dims = false;       // lemma minimum above N or T
};

BoundReport bound_report(const BoundInputs& in);

// --- serialization ----------------------------------------------------------

/// {"seed", "rows", "cols", "entries", "values"} in that order.
std::string to_json(const SampleSet& s);
SampleSet sample_set_from_json(std::string_view text);

}  // namespace tvgs
