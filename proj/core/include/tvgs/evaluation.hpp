#pragma once

// Metrics, Monte Carlo checks of the row/column selection lemmas, the
// ratio-grid experiment runner, and dataset ingestion/windowing.

#include "tvgs/graph_core.hpp"
#include "tvgs/reconstruction.hpp"
#include "tvgs/sampling.hpp"
#include "tvgs/signal_model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tvgs {

/// ||a - b||_F / ||a||_F. Throws UndefinedMetric when a is all zero.
double nrmse(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// SplitMix64 finalizer; used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// Synthetic signal source: graph, horizon and band/rank spec; trial k draws
/// synth_signal(..., seed_k).
struct GeneratorSpec {
  VertexGraph graph;
  Index num_steps = 0;
  SynthSpec synth;
};

/// Seeded uniform points in the unit square joined by a k-NN Gaussian graph.
VertexGraph random_geometric_graph(Index num_vertices, Index k, std::uint64_t seed);

// --- row/column selection lemmas ---------------------------------------------

struct Lemma1Options {
  double delta = 0.1;
  double epsilon = 0.5;
  Index trials = 300;
  std::uint64_t seed = 42;
  Index rows = 0;  // > 0 overrides the lemma minimum
  Index cols = 0;
};

struct Lemma1Report {
  Index trials = 0;
  Index rank = 0;
  Index rank_r_success = 0;   // rank(X(I,:)) = r
  Index rank_rc_success = 0;  // rank(X(I,J)) = r
  double fraction_r = 0.0;
  double fraction_rc = 0.0;
  double floor_r = 0.0;      // 1 - delta
  double floor_rc = 0.0;     // (1 - delta)^2
  double allowance_r = 0.0;  // 3 sqrt(q (1 - q) / trials) at q = floor
  double allowance_rc = 0.0;
  double mu1_max = 0.0;
  double mu2_max = 0.0;
  Index rows_min = 0;  // smallest / largest |I| used over trials
  Index rows_max = 0;
  Index cols_min = 0;
  Index cols_max = 0;
  Index clamped_trials = 0;  // lemma minimum exceeded N or T and was clamped
  bool passes_r() const { return fraction_r >= floor_r - allowance_r; }
  bool passes_rc() const { return fraction_rc >= floor_rc - allowance_rc; }
};

Lemma1Report verify_lemma1(const GeneratorSpec& gen, const Lemma1Options& opt = {});

struct Lemma2Options {
  double eta = 0.5;
  Index trials = 300;
  std::uint64_t seed = 42;
  Index rows = 0;  // 0: Round(0.5 N)
  Index cols = 0;  // 0: Round(0.5 T)
};

struct Lemma2Trial {
  std::uint64_t seed = 0;
  bool full_rank = false;  // rank(X_RC) = r; bounds only checked when true
  double u_norm = 0.0;     // ||U_RC||_{2,inf}
  double u_bound = 0.0;    // kappa sqrt(mu1 r / ((1 - eta)|I|))
  double v_norm = 0.0;     // ||V_RC||_{2,inf}
  double v_bound = 0.0;    // kappa / (1 - eta) sqrt(mu2 N r / (|I||J|))
  double factor_gap = 0.0; // structured vs direct SVD of X_RC, max row-norm gap
  bool u_holds = false;
  bool v_holds = false;
};

struct Lemma2Report {
  Index trials = 0;
  Index rank = 0;
  Index rows = 0;
  Index cols = 0;
  Index full_rank_trials = 0;
  Index rank_deficient_trials = 0;
  Index u_satisfied = 0;
  Index v_satisfied = 0;
  Index both_satisfied = 0;
  double fraction_both = 0.0;  // over full-rank trials
  FailureProbability failure;  // p for (rank, eta)
  double floor = 0.0;          // max(0, (1 - p)^2)
  std::vector<Lemma2Trial> per_trial;
};

Lemma2Report verify_lemma2(const GeneratorSpec& gen, const Lemma2Options& opt = {});

/// Compact SVD of X(I, J) assembled from the SVD of X the way the lemma's
/// proof does: U(I,:) Sigma = U_R Sigma_R W^T, V_R = V W, then
/// Sigma_R V_R(J,:)^T = U~ Sigma_RC V_RC^T and U_RC = U_R U~.
SvdFactors structured_submatrix_svd(const SvdFactors& full, const std::vector<Index>& rows,
                                    const std::vector<Index>& cols);

// --- experiment grid -----------------------------------------------------------

enum class Method { Joint, TwoStage, Svt, Tnnr };
const char* to_string(Method m) noexcept;
Method method_from_string(std::string_view name);

struct RatioSetting {
  double rho_rc = 1.0;
  double rho_sub = 1.0;
};

/// The three ratio settings of the comparison table.
std::vector<RatioSetting> table2_ratios();

struct ExperimentConfig {
  std::vector<RatioSetting> ratios;
  std::vector<Method> methods;
  Index num_trials = 10;
  std::uint64_t base_seed = 42;
  JointSolverConfig joint;
  TwoStageConfig two_stage;
  SvtConfig svt;
  TnnrConfig tnnr;
};

/// Signals scored by the grid: `windows` if nonempty (trial k uses window
/// k mod size), otherwise synthetic draws from `synth`.
struct SignalSource {
  VertexGraph graph;
  Index num_steps = 0;
  SynthSpec synth;
  std::vector<Eigen::MatrixXd> windows;
};

struct TrialOutcome {
  Method method = Method::Joint;
  Index setting = 0;
  RatioSetting ratios;
  Index trial = 0;
  std::uint64_t seed = 0;  // sampling seed
  double nrmse = 0.0;
  double runtime_s = 0.0;
  bool converged = false;
  Index distinct_samples = 0;
};

struct CellSummary {
  Index setting = 0;
  RatioSetting ratios;
  double rho_total = 0.0;
  Method method = Method::Joint;
  Index trials = 0;
  Index converged = 0;
  double mean_nrmse = 0.0;
  double median_nrmse = 0.0;
};

struct ExperimentTable {
  Index num_vertices = 0;
  Index num_steps = 0;
  std::vector<TrialOutcome> outcomes;
  std::vector<CellSummary> cells;  // setting-major, methods in config order

  const CellSummary& cell(Index setting, Method m) const;
};

/// For each setting x trial: one signal per trial index, one subset-sampling
/// sample per (setting, trial) shared by every method, seeds derived from
/// (base_seed, setting, trial).
ExperimentTable run_experiment_grid(const ExperimentConfig& cfg, const SignalSource& source);

double median(std::vector<double> v);

std::string cells_csv(const ExperimentTable& t);
std::string outcomes_csv(const ExperimentTable& t);
std::string experiment_json(const ExperimentTable& t);
/// "rho_total nrmse" lines (median) for one method, ascending rho_total.
std::string plot_data(const ExperimentTable& t, Method m);

// --- datasets --------------------------------------------------------------------

struct Coordinates {
  std::vector<std::string> ids;
  Eigen::MatrixXd points;  // N x 2 (lat, lon)
};

/// `sensor_id,lat,lon` with a header line; rows in signal order.
Coordinates parse_coordinates_csv(std::string_view text);

/// Symmetrized k-NN graph, weight exp(-d^2 / sigma^2) with sigma the mean
/// k-NN distance (Euclidean on the given coordinates).
VertexGraph knn_gaussian_graph(const Eigen::MatrixXd& points, Index k);

/// Symmetrized k-NN graph on |Pearson correlation| between rows; the weight
/// is the absolute correlation. Pairs with zero correlation are not joined.
VertexGraph correlation_knn_graph(const Eigen::MatrixXd& data, Index k);

/// Non-overlapping windows of T columns; the tail shorter than T is dropped.
std::vector<Eigen::MatrixXd> split_windows(const Eigen::MatrixXd& data, Index window_len);

struct DatasetOptions {
  Index window_len = 512;
  Index num_sensors = 0;          // 0: rows are sensors unless rows > cols
  std::string coordinates_path;   // empty: correlation graph
  Index knn_k = 5;
};

struct Dataset {
  VertexGraph graph;
  std::vector<Ftvgs> windows;
  bool transposed = false;  // input was timesteps x sensors
};

/// Orients a sensors x time matrix (or its transpose) per `num_sensors`.
Eigen::MatrixXd orient_sensor_matrix(const Eigen::MatrixXd& raw, Index num_sensors,
                                     bool* transposed = nullptr);

Dataset ingest_dataset(const std::string& path, const DatasetOptions& opt);

}  // namespace tvgs
