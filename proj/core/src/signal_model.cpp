#include "tvgs/signal_model.hpp"

#include "svd.hpp"
#include "tvgs/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <utility>

namespace tvgs {

Ftvgs::Ftvgs(Eigen::MatrixXd data, VertexGraph graph, TimeHorizon horizon)
    : data_(std::move(data)), graph_(std::move(graph)), horizon_(horizon) {
  require(data_.rows() == graph_.num_vertices(), ErrorKind::InvalidInput,
          "signal rows (" + std::to_string(data_.rows()) + ") != graph vertices (" +
              std::to_string(graph_.num_vertices()) + ")");
  require(data_.cols() == horizon_.num_steps, ErrorKind::InvalidInput,
          "signal columns (" + std::to_string(data_.cols()) + ") != horizon (" +
              std::to_string(horizon_.num_steps) + ")");
  require(data_.allFinite(), ErrorKind::InvalidInput, "signal contains non-finite entries");
}

SvdFactors thin_svd(const Eigen::MatrixXd& x, double rank_tol) {
  require(rank_tol > 0.0, ErrorKind::InvalidInput, "rank tolerance must be positive");
  require(x.size() > 0 && x.allFinite(), ErrorKind::InvalidInput,
          "SVD input must be nonempty and finite");

  const detail::Svd svd = detail::thin_svd(x);
  const Eigen::VectorXd& s = svd.s;
  require(s.size() > 0 && s(0) > 0.0, ErrorKind::ZeroRank, "matrix is identically zero");

  Index r = 0;
  while (r < s.size() && s(r) > rank_tol * s(0)) ++r;

  SvdFactors f;
  f.rank = r;
  f.sigma = s.head(r);
  f.u = svd.u.leftCols(r);
  f.v = svd.v.leftCols(r);
  for (Index c = 0; c < r; ++c) {
    const double scale = f.u.col(c).cwiseAbs().maxCoeff();
    for (Index i = 0; i < f.u.rows(); ++i) {
      if (std::abs(f.u(i, c)) > 1e-10 * scale) {
        if (f.u(i, c) < 0.0) {
          f.u.col(c) *= -1.0;
          f.v.col(c) *= -1.0;
        }
        break;
      }
    }
  }
  return f;
}

Index numerical_rank(const Eigen::MatrixXd& x, double rank_tol) {
  if (x.size() == 0) return 0;
  const Eigen::VectorXd s = detail::singular_values(x);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  while (r < s.size() && s(r) > rank_tol * s(0)) ++r;
  return r;
}

double two_inf_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return m.rowwise().norm().maxCoeff();
}

IncoherenceProfile incoherence(const Eigen::MatrixXd& x, double rank_tol) {
  const SvdFactors f = thin_svd(x, rank_tol);
  const auto r = static_cast<double>(f.rank);
  const auto n = static_cast<double>(x.rows());
  const auto t = static_cast<double>(x.cols());

  const double u_max = two_inf_norm(f.u);
  const double v_max = two_inf_norm(f.v);

  IncoherenceProfile p;
  p.rank = f.rank;
  // Row norms of an orthonormal basis sum (squared) to r, so these lie in
  // [1, N/r] and [1, T/r] exactly; the clamp only absorbs rounding.
  p.mu1 = std::clamp(n / r * u_max * u_max, 1.0, n / r);
  p.mu2 = std::clamp(t / r * v_max * v_max, 1.0, t / r);
  p.kappa = f.sigma(0) / f.sigma(f.rank - 1);
  return p;
}

IncoherenceProfile incoherence(const Ftvgs& x, double rank_tol) {
  IncoherenceProfile p = incoherence(x.data(), rank_tol);
  const GraphOperators ops = build_operators(x.graph());
  const TimeOperators tops = build_time_operators(x.horizon());
  p.smoothness_c = smoothness_constant(x.data(), ops, tops);
  return p;
}

Eigen::MatrixXd synth_signal(const GraphOperators& ops, const TimeOperators& tops,
                             const SynthSpec& spec, std::uint64_t seed) {
  const Index n = ops.num_vertices();
  const Index t = tops.num_steps();
  require(spec.rank >= 1, ErrorKind::InvalidInput, "rank must be >= 1");
  require(spec.graph_band >= spec.rank && spec.time_band >= spec.rank, ErrorKind::InvalidInput,
          "rank must not exceed either band");
  require(spec.graph_band <= n && spec.time_band <= t, ErrorKind::InvalidInput,
          "band exceeds the signal dimensions");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> real_normal(0.0, 1.0);
  std::normal_distribution<double> half_normal(0.0, std::sqrt(0.5));

  Eigen::MatrixXd a(spec.graph_band, spec.rank);
  for (Index c = 0; c < a.cols(); ++c)
    for (Index r = 0; r < a.rows(); ++r) a(r, c) = real_normal(rng);

  Eigen::MatrixXcd b(spec.time_band, spec.rank);
  for (Index c = 0; c < b.cols(); ++c)
    for (Index r = 0; r < b.rows(); ++r) {
      const double re = half_normal(rng);
      const double im = half_normal(rng);
      b(r, c) = {re, im};
    }

  // Re(G H) = G Re(H) for real G, and Re((Psi_T B)^H) = Re(Psi_T B)^T.
  const Eigen::MatrixXd vertex_factor = ops.gft_basis.leftCols(spec.graph_band) * a;
  const Eigen::MatrixXd time_factor = (tops.dft_basis.leftCols(spec.time_band) * b).real();
  Eigen::MatrixXd x = vertex_factor * time_factor.transpose();

  const double norm = x.norm();
  require(norm > 0.0, ErrorKind::InvalidInput, "degenerate synthetic draw");
  return x / norm;
}

Ftvgs synth_ftvgs(const VertexGraph& graph, TimeHorizon horizon, const SynthSpec& spec,
                  std::uint64_t seed) {
  const GraphOperators ops = build_operators(graph);
  const TimeOperators tops = build_time_operators(horizon);
  return Ftvgs(synth_signal(ops, tops, spec, seed), graph, horizon);
}

}  // namespace tvgs
