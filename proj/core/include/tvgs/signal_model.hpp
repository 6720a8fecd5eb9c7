#pragma once

#include "tvgs/graph_core.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace tvgs {

/// A finite time-vertex graph signal: N x T data bound to its vertex graph
/// and time horizon.
class Ftvgs {
 public:
  /// Throws InvalidInput if the data shape disagrees with the graph or the
  /// horizon, or if any entry is not finite.
  Ftvgs(Eigen::MatrixXd data, VertexGraph graph, TimeHorizon horizon);

  const Eigen::MatrixXd& data() const noexcept { return data_; }
  const VertexGraph& graph() const noexcept { return graph_; }
  TimeHorizon horizon() const noexcept { return horizon_; }
  Index num_vertices() const noexcept { return data_.rows(); }
  Index num_steps() const noexcept { return data_.cols(); }

 private:
  Eigen::MatrixXd data_;
  VertexGraph graph_;
  TimeHorizon horizon_;
};

struct SvdFactors {
  Eigen::MatrixXd u;      // N x r, orthonormal columns
  Eigen::VectorXd sigma;  // r, descending
  Eigen::MatrixXd v;      // T x r, orthonormal columns
  Index rank = 0;
};

struct IncoherenceProfile {
  Index rank = 0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double kappa = 1.0;
  double smoothness_c = 0.0;
};

inline constexpr double kDefaultRankTol = 1e-9;

/// Thin SVD truncated at the numerical rank (sigma_i > rank_tol * sigma_max).
/// Signs are fixed so the first non-negligible entry of each U column is
/// positive. Throws ZeroRank for an all-zero matrix.
SvdFactors thin_svd(const Eigen::MatrixXd& x, double rank_tol = kDefaultRankTol);

Index numerical_rank(const Eigen::MatrixXd& x, double rank_tol = kDefaultRankTol);

/// Largest row Euclidean norm.
double two_inf_norm(const Eigen::MatrixXd& m);

/// Tightest incoherence constants mu1 = (N/r)||U||^2_{2,inf},
/// mu2 = (T/r)||V||^2_{2,inf} and kappa = sigma_1 / sigma_r.
/// smoothness_c is left at 0; use the Ftvgs overload to fill it.
IncoherenceProfile incoherence(const Eigen::MatrixXd& x, double rank_tol = kDefaultRankTol);
IncoherenceProfile incoherence(const Ftvgs& x, double rank_tol = kDefaultRankTol);

struct SynthSpec {
  Index rank = 1;
  Index graph_band = 1;  // k_G: leading GFT modes kept
  Index time_band = 1;   // k_T: leading DFT frequencies kept
};

/// Re( Psi_G(:, :k_G) A B^H Psi_T(:, :k_T)^H ), A real k_G x r and B complex
/// k_T x r with standard normal entries, scaled to unit Frobenius norm.
/// Deterministic in `seed`.
Eigen::MatrixXd synth_signal(const GraphOperators& ops, const TimeOperators& tops,
                             const SynthSpec& spec, std::uint64_t seed);

Ftvgs synth_ftvgs(const VertexGraph& graph, TimeHorizon horizon, const SynthSpec& spec,
                  std::uint64_t seed);

}  // namespace tvgs
