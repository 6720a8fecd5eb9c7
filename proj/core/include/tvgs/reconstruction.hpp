#pragma once

// Recovery of a full N x T signal from a SampleSet.
//
//  * solve_joint: log-determinant surrogate on the singular values plus
//    weighted l1 penalties on the graph spectrum (Psi_G^T X) and the temporal
//    spectrum (Psi_T^H X^T), with the observations held fixed.
//  * two_stage_reconstruct: nuclear-norm completion of the sampled block
//    X(I, J), then smoothed total-variation inpainting of the unselected rows
//    and columns.
//  * svt_baseline / tnnr_baseline: plain matrix-completion baselines.

#include "tvgs/graph_core.hpp"
#include "tvgs/sampling.hpp"

#include <Eigen/Dense>

#include <vector>

namespace tvgs {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct ReconstructionResult {
  Eigen::MatrixXd x_hat;
  Eigen::MatrixXd error_matrix;  // E: zero on sampled positions, -x_hat elsewhere
  std::vector<double> objective_trace;
  bool converged = false;
  int iterations = 0;
  double max_constraint_violation = 0.0;  // max over S of |x_hat - observed|
};

struct JointSolverConfig {
  double gamma_g = 1e-3;
  double gamma_t = 1e-3;
  int max_iters = 500;     // reweighting (outer) iterations
  double obj_tol = 1e-6;   // relative objective decrease that counts as converged
  double weight_eps = 1e-3;
  int inner_iters = 100;   // ADMM iterations per reweighting step
  double penalty = 1.0;    // initial ADMM penalty, adapted by residual balancing
};

struct CompletionConfig {
  int max_iters = 3000;
  double tol = 1e-9;
  double penalty = 0.0;  // <= 0: chosen from the data scale
};

struct TvInpaintConfig {
  double smoothing_a = 1.0;  // a, relative to the RMS of the known values
  int max_iters = 5000;
  double tol = 1e-10;        // relative objective decrease per iteration
  double initial_step = 0.0; // <= 0: chosen from a
};

struct TwoStageConfig {
  CompletionConfig completion;
  TvInpaintConfig tv;
};

struct SvtConfig {
  double tau = 1e-3;  // threshold relative to ||P_S(M)||_F
  double step = 1.0;  // proximal-gradient step in (0, 1]
  int max_iters = 2000;
  double tol = 1e-7;  // relative change of the iterate
};

struct TnnrConfig {
  Index trunc_rank = 3;
  double lambda = 100.0;  // data-fit weight on the ||P_S(M)||_F = 1 scale
  int max_iters = 50;     // outer (truncation) updates
  int inner_iters = 200;
  double tol = 1e-7;
};

/// Distinct observations of a sample set in the N x T frame. Duplicate draws
/// collapse; conflicting duplicates and non-finite values are rejected.
struct Observations {
  BoolMatrix mask;
  Eigen::MatrixXd values;  // zero off the mask
  Index count = 0;
};
Observations collect_observations(const SampleSet& s, Index n, Index t);

ReconstructionResult solve_joint(const SampleSet& s, const GraphOperators& ops,
                                 const TimeOperators& tops, const JointSolverConfig& cfg = {});

/// Minimum-nuclear-norm completion of X(I, J) in the |I| x |J| frame, equal
/// to the observations at sampled positions.
Eigen::MatrixXd complete_submatrix(const SampleSet& s, const CompletionConfig& cfg = {});

/// Fills the unknown entries of `partial` by gradient descent on
/// sum_{i,j} ||grad X(i,j)||_a with the known entries held fixed.
ReconstructionResult tv_inpaint(const Eigen::MatrixXd& partial, const BoolMatrix& known,
                                const GraphOperators& ops, const TimeOperators& tops,
                                const TvInpaintConfig& cfg = {});
/// Known set given as the block rows x cols.
ReconstructionResult tv_inpaint(const Eigen::MatrixXd& partial, const std::vector<Index>& rows,
                                const std::vector<Index>& cols, const GraphOperators& ops,
                                const TimeOperators& tops, const TvInpaintConfig& cfg = {});

/// sum_{i,j} sqrt(sum_{e ~ i} (Q^T X)(e,j)^2 + (X D1)(i,j)^2 + a^2) and its
/// gradient with respect to X.
double tv_objective(const Eigen::MatrixXd& x, const GraphOperators& ops, double a);
double tv_objective(const Eigen::MatrixXd& x, const GraphOperators& ops, double a,
                    Eigen::MatrixXd& gradient);

ReconstructionResult two_stage_reconstruct(const SampleSet& s, const GraphOperators& ops,
                                           const TimeOperators& tops,
                                           const TwoStageConfig& cfg = {});

ReconstructionResult svt_baseline(const SampleSet& s, Index n, Index t, const SvtConfig& cfg = {});
ReconstructionResult tnnr_baseline(const SampleSet& s, Index n, Index t,
                                   const TnnrConfig& cfg = {});

/// U max(Sigma - tau, 0) V^T.
Eigen::MatrixXd singular_value_shrink(const Eigen::MatrixXd& m, double tau);

/// sum_i log(sigma_i(X) + 1), i.e. sum_i g(lambda_i(X^T X)) with g(x) = log(sqrt(x) + 1).
double log_surrogate(const Eigen::MatrixXd& x);

}  // namespace tvgs
