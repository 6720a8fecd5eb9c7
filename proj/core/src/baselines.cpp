#include "svd.hpp"
#include "tvgs/error.hpp"
#include "tvgs/reconstruction.hpp"

#include <algorithm>
#include <cmath>

namespace tvgs {

namespace {

Eigen::MatrixXd masked(const BoolMatrix& mask, const Eigen::MatrixXd& x) {
  return mask.select(x, Eigen::MatrixXd::Zero(x.rows(), x.cols()));
}

void finish(ReconstructionResult& res, const Observations& obs, double scale) {
  res.x_hat *= scale;
  res.error_matrix = obs.mask.select(Eigen::MatrixXd::Zero(res.x_hat.rows(), res.x_hat.cols()),
                                     -res.x_hat);
  double viol = 0.0;
  for (Index j = 0; j < obs.mask.cols(); ++j)
    for (Index i = 0; i < obs.mask.rows(); ++i)
      if (obs.mask(i, j)) viol = std::max(viol, std::abs(res.x_hat(i, j) - obs.values(i, j)));
  res.max_constraint_violation = viol;
}

}  // namespace

// Proximal gradient on tau ||X||_* + 1/2 ||P_S(X - M)||_F^2. The smooth part
// has a 1-Lipschitz gradient, so any step in (0, 1] decreases the objective.
ReconstructionResult svt_baseline(const SampleSet& s, Index n, Index t, const SvtConfig& cfg) {
  require(cfg.tau >= 0.0, ErrorKind::InvalidInput, "SVT threshold must be non-negative");
  require(cfg.step > 0.0 && cfg.step <= 1.0, ErrorKind::InvalidInput,
          "SVT step must lie in (0, 1]");
  require(cfg.max_iters >= 1 && cfg.tol > 0.0, ErrorKind::InvalidInput,
          "SVT needs positive iterations and tolerance");
  validate(s, n, t);
  const Observations obs = collect_observations(s, n, t);
  ReconstructionResult res;
  const double scale = obs.values.norm();
  if (scale == 0.0) {
    res.x_hat = Eigen::MatrixXd::Zero(n, t);
    res.objective_trace = {0.0};
    res.converged = true;
    finish(res, obs, 1.0);
    return res;
  }
  const Eigen::MatrixXd m = obs.values / scale;
  auto objective = [&](const Eigen::MatrixXd& x) {
    const double nuc = detail::singular_values(x).sum();
    return cfg.tau * nuc + 0.5 * masked(obs.mask, x - m).squaredNorm();
  };

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, t);
  res.objective_trace.push_back(objective(x));
  for (int k = 0; k < cfg.max_iters; ++k) {
    res.iterations = k + 1;
    const Eigen::MatrixXd xn =
        singular_value_shrink(x - cfg.step * masked(obs.mask, x - m), cfg.step * cfg.tau);
    const double change = (xn - x).norm();
    x = xn;
    res.objective_trace.push_back(objective(x));
    if (change <= cfg.tol * std::max(x.norm(), 1e-300)) {
      res.converged = true;
      break;
    }
  }
  res.x_hat = x;
  finish(res, obs, scale);
  return res;
}

// Truncated nuclear norm sum_{i > r} sigma_i(X) + lambda/2 ||P_S(X - M)||^2.
// Each outer step fixes the top-r singular pair A, B and minimizes the convex
// majorizer ||X||_* - tr(A^T X B) + lambda/2 ||P_S(X - M)||^2 by proximal
// gradient; the recorded objective is the truncated one at outer iterates.
ReconstructionResult tnnr_baseline(const SampleSet& s, Index n, Index t, const TnnrConfig& cfg) {
  require(cfg.trunc_rank >= 0, ErrorKind::InvalidInput, "truncation rank must be >= 0");
  require(cfg.trunc_rank <= std::min(n, t), ErrorKind::InvalidInput,
          "truncation rank exceeds min(N, T)");
  require(cfg.lambda > 0.0 && cfg.tol > 0.0, ErrorKind::InvalidInput,
          "TNNR lambda and tolerance must be positive");
  require(cfg.max_iters >= 1 && cfg.inner_iters >= 1, ErrorKind::InvalidInput,
          "TNNR iteration limits must be positive");
  validate(s, n, t);
  const Observations obs = collect_observations(s, n, t);
  ReconstructionResult res;
  const double scale = obs.values.norm();
  if (scale == 0.0) {
    res.x_hat = Eigen::MatrixXd::Zero(n, t);
    res.objective_trace = {0.0};
    res.converged = true;
    finish(res, obs, 1.0);
    return res;
  }
  const Eigen::MatrixXd m = obs.values / scale;
  const Index r = cfg.trunc_rank;
  auto objective = [&](const Eigen::VectorXd& sv, const Eigen::MatrixXd& x) {
    return sv.tail(sv.size() - std::min<Index>(r, sv.size())).sum() +
           0.5 * cfg.lambda * masked(obs.mask, x - m).squaredNorm();
  };

  Eigen::MatrixXd x = m;
  for (int outer = 0; outer < cfg.max_iters; ++outer) {
    res.iterations = outer + 1;
    const detail::Svd svd = detail::thin_svd(x);
    const double value = objective(svd.s, x);
    if (!res.objective_trace.empty()) {
      const double prev = res.objective_trace.back();
      res.objective_trace.push_back(value);
      if (prev - value <= cfg.tol * std::max(std::abs(prev), 1e-300)) {
        res.converged = true;
        break;
      }
    } else {
      res.objective_trace.push_back(value);
    }
    const Eigen::MatrixXd ab = svd.u.leftCols(r) * svd.v.leftCols(r).transpose();
    const Eigen::MatrixXd pm = masked(obs.mask, m);
    for (int it = 0; it < cfg.inner_iters; ++it) {
      const Eigen::MatrixXd y = pm + obs.mask.select(Eigen::MatrixXd::Zero(n, t), x) + ab / cfg.lambda;
      const Eigen::MatrixXd xn = singular_value_shrink(y, 1.0 / cfg.lambda);
      const double change = (xn - x).norm();
      x = xn;
      if (change <= cfg.tol * std::max(x.norm(), 1e-300)) break;
    }
  }
  if (!res.converged) {
    const Eigen::VectorXd sv = detail::singular_values(x);
    res.objective_trace.push_back(objective(sv, x));
  }
  res.x_hat = x;
  finish(res, obs, scale);
  return res;
}

}  // namespace tvgs
