#include "tvgs/reconstruction.hpp"

#include "svd.hpp"
#include "tvgs/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace tvgs {

namespace {

// Collapses observations into the frame given by row/col index maps.
Observations collect_in_frame(const SampleSet& s, Index n, Index t,
                              const std::vector<Index>& row_map, const std::vector<Index>& col_map) {
  require(s.values.size() == s.entries.size(), ErrorKind::InvalidInput,
          "sample set has " + std::to_string(s.entries.size()) + " entries but " +
              std::to_string(s.values.size()) + " values");
  Observations obs;
  obs.mask = BoolMatrix::Constant(n, t, false);
  obs.values = Eigen::MatrixXd::Zero(n, t);
  for (std::size_t k = 0; k < s.entries.size(); ++k) {
    const SampleEntry& e = s.entries[k];
    const double v = s.values[k];
    require(std::isfinite(v), ErrorKind::InvalidInput, "non-finite observed value");
    const Index i = row_map.empty() ? e.row : row_map[static_cast<std::size_t>(e.row)];
    const Index j = col_map.empty() ? e.col : col_map[static_cast<std::size_t>(e.col)];
    require(i >= 0 && i < n && j >= 0 && j < t, ErrorKind::OutOfRange,
            "sample (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                ") outside the signal");
    if (obs.mask(i, j)) {
      require(obs.values(i, j) == v, ErrorKind::InvalidInput,
              "conflicting duplicate observations at (" + std::to_string(e.row) + ", " +
                  std::to_string(e.col) + ")");
      continue;
    }
    obs.mask(i, j) = true;
    obs.values(i, j) = v;
    ++obs.count;
  }
  return obs;
}

Eigen::MatrixXd apply_mask(const BoolMatrix& mask, const Eigen::MatrixXd& on, const Eigen::MatrixXd& off) {
  return mask.select(on, off);
}

void finish_result(ReconstructionResult& res, const Observations& obs) {
  res.error_matrix = apply_mask(obs.mask, Eigen::MatrixXd::Zero(obs.values.rows(), obs.values.cols()),
                                -res.x_hat);
  double viol = 0.0;
  for (Index j = 0; j < obs.mask.cols(); ++j)
    for (Index i = 0; i < obs.mask.rows(); ++i)
      if (obs.mask(i, j)) viol = std::max(viol, std::abs(res.x_hat(i, j) - obs.values(i, j)));
  res.max_constraint_violation = viol;
}

// Spectral state of the joint objective at X.
struct JointTerms {
  Eigen::VectorXd sigma;
  Eigen::VectorXd graph_mean;  // per GFT mode, mean over time of |Psi_G^T X|
  Eigen::VectorXd time_mean;   // per DFT frequency, mean over vertices of |Psi_T^H X^T|
  double value = 0.0;
};

JointTerms joint_terms(const Eigen::MatrixXd& x, const Eigen::MatrixXd& psi_g,
                       const Eigen::MatrixXcd& psi_t_conj, const JointSolverConfig& cfg) {
  const auto n = static_cast<double>(x.rows());
  const auto t = static_cast<double>(x.cols());
  JointTerms jt;
  jt.sigma = detail::singular_values(x);
  jt.graph_mean = (psi_g.transpose() * x).cwiseAbs().rowwise().mean();
  // (X conj(Psi_T))(i, k) = (Psi_T^H X^T)(k, i).
  const Eigen::MatrixXcd ft = x.cast<std::complex<double>>() * psi_t_conj;
  jt.time_mean = ft.cwiseAbs().colwise().mean().transpose();
  const double eps = cfg.weight_eps;
  jt.value = jt.sigma.array().log1p().sum() +
             cfg.gamma_g * t * (jt.graph_mean.array() / eps).log1p().sum() +
             cfg.gamma_t * n * (jt.time_mean.array() / eps).log1p().sum();
  return jt;
}

template <typename Derived, typename W>
void soft_threshold_inplace(Eigen::MatrixBase<Derived>& m, const W& thresh) {
  for (Index c = 0; c < m.cols(); ++c)
    for (Index r = 0; r < m.rows(); ++r) {
      const double th = thresh(r, c);
      const double mag = std::abs(m(r, c));
      m(r, c) = mag > th ? m(r, c) * ((mag - th) / mag) : typename Derived::Scalar(0);
    }
}

}  // namespace

Observations collect_observations(const SampleSet& s, Index n, Index t) {
  require(n >= 1 && t >= 1, ErrorKind::InvalidInput, "signal dimensions must be positive");
  return collect_in_frame(s, n, t, {}, {});
}

Eigen::MatrixXd singular_value_shrink(const Eigen::MatrixXd& m, double tau) {
  require(tau >= 0.0, ErrorKind::InvalidInput, "shrinkage threshold must be non-negative");
  if (m.size() == 0) return m;
  if (tau == 0.0) return m;
  const detail::Svd svd = detail::thin_svd(m);
  const Eigen::VectorXd s = (svd.s.array() - tau).max(0.0).matrix();
  return svd.u * s.asDiagonal() * svd.v.transpose();
}

double log_surrogate(const Eigen::MatrixXd& x) {
  if (x.size() == 0) return 0.0;
  return detail::singular_values(x).array().log1p().sum();
}

ReconstructionResult solve_joint(const SampleSet& s, const GraphOperators& ops,
                                 const TimeOperators& tops, const JointSolverConfig& cfg) {
  require(cfg.gamma_g >= 0.0 && cfg.gamma_t >= 0.0, ErrorKind::InvalidInput,
          "penalty weights must be non-negative");
  require(cfg.max_iters >= 1 && cfg.inner_iters >= 1, ErrorKind::InvalidInput,
          "iteration limits must be positive");
  require(cfg.obj_tol > 0.0 && cfg.weight_eps > 0.0 && cfg.penalty > 0.0,
          ErrorKind::InvalidInput, "tolerances and penalty must be positive");
  const Index n = ops.num_vertices();
  const Index t = tops.num_steps();
  validate(s, n, t);
  const Observations obs = collect_observations(s, n, t);

  ReconstructionResult res;
  const double scale = obs.values.norm();
  if (scale == 0.0) {
    res.x_hat = Eigen::MatrixXd::Zero(n, t);
    res.objective_trace = {0.0};
    res.converged = true;
    res.iterations = 1;
    finish_result(res, obs);
    return res;
  }
  const Eigen::MatrixXd m_obs = obs.values / scale;
  const Eigen::MatrixXd& psi_g = ops.gft_basis;
  const Eigen::MatrixXcd psi_t_conj = tops.dft_basis.conjugate();
  const Eigen::MatrixXcd psi_t_trans = tops.dft_basis.transpose();

  Eigen::MatrixXd x = m_obs;
  Eigen::MatrixXd u[3] = {Eigen::MatrixXd::Zero(n, t), Eigen::MatrixXd::Zero(n, t),
                          Eigen::MatrixXd::Zero(n, t)};
  Eigen::MatrixXd z[3];
  Eigen::VectorXd w_graph = Eigen::VectorXd::Ones(n);  // per GFT mode
  Eigen::VectorXd w_time = Eigen::VectorXd::Ones(t);   // per DFT frequency
  double rho = cfg.penalty;

  Eigen::MatrixXd accepted = x;
  double accepted_value = std::numeric_limits<double>::infinity();
  int retries = 0;

  for (int outer = 0; outer < cfg.max_iters; ++outer) {
    res.iterations = outer + 1;
    Eigen::VectorXd w_sigma = detail::singular_values(accepted);
    w_sigma = (w_sigma.array() + 1.0).inverse().matrix();
    if (outer > 0) {
      const JointTerms jt = joint_terms(accepted, psi_g, psi_t_conj, cfg);
      w_graph = (jt.graph_mean.array() + cfg.weight_eps).inverse().matrix();
      w_time = (jt.time_mean.array() + cfg.weight_eps).inverse().matrix();
    }

    for (int it = 0; it < cfg.inner_iters; ++it) {
      // Weighted singular value thresholding; weights ascend as sigma descends.
      {
        const detail::Svd svd = detail::thin_svd(x - u[0]);
        Eigen::VectorXd sv = svd.s;
        for (Index k = 0; k < sv.size(); ++k)
          sv(k) = std::max(sv(k) - (k < w_sigma.size() ? w_sigma(k) : 1.0) / rho, 0.0);
        z[0] = svd.u * sv.asDiagonal() * svd.v.transpose();
      }
      {
        Eigen::MatrixXd fg = psi_g.transpose() * (x - u[1]);
        const double c = cfg.gamma_g / rho;
        soft_threshold_inplace(fg, [&](Index r, Index) { return c * w_graph(r); });
        z[1] = psi_g * fg;
      }
      {
        Eigen::MatrixXcd ft = (x - u[2]).cast<std::complex<double>>() * psi_t_conj;
        const double c = cfg.gamma_t / rho;
        soft_threshold_inplace(ft, [&](Index, Index k) { return c * w_time(k); });
        z[2] = (ft * psi_t_trans).real();
      }
      const Eigen::MatrixXd x_old = x;
      x = apply_mask(obs.mask, m_obs, (z[0] + u[0] + z[1] + u[1] + z[2] + u[2]) / 3.0);
      double primal = 0.0;
      for (int m = 0; m < 3; ++m) {
        primal += (z[m] - x).squaredNorm();
        u[m] += z[m] - x;
      }
      primal = std::sqrt(primal);
      const double dual = rho * std::sqrt(3.0) * (x - x_old).norm();
      if (it % 10 == 0) {
        if (primal > 10.0 * dual) {
          rho *= 2.0;
          for (auto& um : u) um /= 2.0;
        } else if (dual > 10.0 * primal) {
          rho /= 2.0;
          for (auto& um : u) um *= 2.0;
        }
      }
    }

    const double value = joint_terms(x, psi_g, psi_t_conj, cfg).value;
    if (value > accepted_value) {
      // The inner solve was not accurate enough to realize the majorizer's
      // descent; give it one more block before stopping at the last iterate.
      if (++retries > 1) {
        res.converged = true;
        break;
      }
      continue;
    }
    retries = 0;
    const double prev = accepted_value;
    accepted = x;
    accepted_value = value;
    res.objective_trace.push_back(value);
    if (std::isfinite(prev) && prev - value <= cfg.obj_tol * std::max(std::abs(prev), 1e-300)) {
      res.converged = true;
      break;
    }
  }

  // Observed entries are copied, not rescaled, so they match bit for bit.
  res.x_hat = apply_mask(obs.mask, obs.values, accepted * scale);
  finish_result(res, obs);
  return res;
}

Eigen::MatrixXd complete_submatrix(const SampleSet& s, const CompletionConfig& cfg) {
  require(cfg.max_iters >= 1 && cfg.tol > 0.0, ErrorKind::InvalidInput,
          "completion needs positive iterations and tolerance");
  require(!s.rows.empty() && !s.cols.empty(), ErrorKind::InvalidInput,
          "sample set has no selected rows or columns");
  const Index max_row = s.rows.back() + 1;
  const Index max_col = s.cols.back() + 1;
  std::vector<Index> row_map(static_cast<std::size_t>(max_row), -1);
  std::vector<Index> col_map(static_cast<std::size_t>(max_col), -1);
  for (std::size_t k = 0; k < s.rows.size(); ++k)
    row_map[static_cast<std::size_t>(s.rows[k])] = static_cast<Index>(k);
  for (std::size_t k = 0; k < s.cols.size(); ++k)
    col_map[static_cast<std::size_t>(s.cols[k])] = static_cast<Index>(k);
  for (const SampleEntry& e : s.entries)
    require(e.row >= 0 && e.row < max_row && e.col >= 0 && e.col < max_col &&
                row_map[static_cast<std::size_t>(e.row)] >= 0 &&
                col_map[static_cast<std::size_t>(e.col)] >= 0,
            ErrorKind::OutOfRange, "sample outside the selected rows x columns");
  const auto nr = static_cast<Index>(s.rows.size());
  const auto nc = static_cast<Index>(s.cols.size());
  const Observations obs = collect_in_frame(s, nr, nc, row_map, col_map);
  if (obs.count == 0 || obs.values.norm() == 0.0) return Eigen::MatrixXd::Zero(nr, nc);

  // ADMM on min ||Z||_* s.t. Z = X, P_S(X) = P_S(M).
  const double rms = obs.values.norm() / std::sqrt(static_cast<double>(obs.count));
  const double rho = cfg.penalty > 0.0 ? cfg.penalty : 1.0 / rms;
  Eigen::MatrixXd x = obs.values;
  Eigen::MatrixXd z = x;
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(nr, nc);
  for (int k = 0; k < cfg.max_iters; ++k) {
    z = singular_value_shrink(x + u, 1.0 / rho);
    Eigen::MatrixXd xn = apply_mask(obs.mask, obs.values, z - u);
    u += xn - z;
    const double xnorm = std::max(xn.norm(), 1e-300);
    const bool done = (xn - x).norm() <= cfg.tol * xnorm && (xn - z).norm() <= cfg.tol * xnorm;
    x = std::move(xn);
    if (done) break;
  }
  return x;
}

ReconstructionResult two_stage_reconstruct(const SampleSet& s, const GraphOperators& ops,
                                           const TimeOperators& tops, const TwoStageConfig& cfg) {
  const Index n = ops.num_vertices();
  const Index t = tops.num_steps();
  validate(s, n, t);
  const Observations obs = collect_observations(s, n, t);
  const Eigen::MatrixXd block = complete_submatrix(s, cfg.completion);

  Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(n, t);
  for (std::size_t a = 0; a < s.rows.size(); ++a)
    for (std::size_t b = 0; b < s.cols.size(); ++b)
      partial(s.rows[a], s.cols[b]) = block(static_cast<Index>(a), static_cast<Index>(b));

  ReconstructionResult res = tv_inpaint(partial, s.rows, s.cols, ops, tops, cfg.tv);
  finish_result(res, obs);
  return res;
}

}  // namespace tvgs
