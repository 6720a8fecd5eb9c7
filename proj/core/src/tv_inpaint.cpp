#include "tvgs/error.hpp"
#include "tvgs/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tvgs {

namespace {

void check_shape(const Eigen::MatrixXd& x, const GraphOperators& ops) {
  require(x.rows() == ops.num_vertices(), ErrorKind::InvalidInput,
          "signal rows (" + std::to_string(x.rows()) + ") != graph vertices (" +
              std::to_string(ops.num_vertices()) + ")");
  require(x.cols() >= 1, ErrorKind::InvalidInput, "signal has no columns");
}

double tv_eval(const Eigen::MatrixXd& x, const GraphOperators& ops, double a,
               Eigen::MatrixXd* gradient) {
  check_shape(x, ops);
  require(a > 0.0 && std::isfinite(a), ErrorKind::InvalidInput,
          "smoothing parameter a must be positive");
  const Index n = x.rows();
  const Index t = x.cols();
  const auto m = static_cast<Index>(ops.edges.size());

  // Edge differences sqrt(w) (x_u - x_v), one row per edge.
  Eigen::MatrixXd g(m, t);
  Eigen::VectorXd sqrt_w(m);
  Eigen::ArrayXXd sq = Eigen::ArrayXXd::Constant(n, t, a * a);
  for (Index e = 0; e < m; ++e) {
    const Edge& ed = ops.edges[static_cast<std::size_t>(e)];
    sqrt_w(e) = std::sqrt(ed.weight);
    g.row(e) = sqrt_w(e) * (x.row(ed.u) - x.row(ed.v));
    const Eigen::ArrayXXd g2 = g.row(e).array().square();
    sq.row(ed.u) += g2;
    sq.row(ed.v) += g2;
  }
  Eigen::MatrixXd dt;
  if (t > 1) {
    dt = x.rightCols(t - 1) - x.leftCols(t - 1);
    sq.leftCols(t - 1) += dt.array().square();
  }
  const Eigen::ArrayXXd norms = sq.sqrt();
  if (gradient != nullptr) {
    const Eigen::ArrayXXd c = norms.inverse();
    Eigen::MatrixXd& grad = *gradient;
    grad.setZero(n, t);
    for (Index e = 0; e < m; ++e) {
      const Edge& ed = ops.edges[static_cast<std::size_t>(e)];
      const Eigen::ArrayXXd coef =
          sqrt_w(e) * g.row(e).array() * (c.row(ed.u) + c.row(ed.v));
      grad.row(ed.u).array() += coef;
      grad.row(ed.v).array() -= coef;
    }
    if (t > 1) {
      const Eigen::MatrixXd w = (c.leftCols(t - 1) * dt.array()).matrix();
      grad.leftCols(t - 1) -= w;
      grad.rightCols(t - 1) += w;
    }
  }
  return norms.sum();
}

}  // namespace

double tv_objective(const Eigen::MatrixXd& x, const GraphOperators& ops, double a) {
  return tv_eval(x, ops, a, nullptr);
}

double tv_objective(const Eigen::MatrixXd& x, const GraphOperators& ops, double a,
                    Eigen::MatrixXd& gradient) {
  return tv_eval(x, ops, a, &gradient);
}

ReconstructionResult tv_inpaint(const Eigen::MatrixXd& partial, const BoolMatrix& known,
                                const GraphOperators& ops, const TimeOperators& tops,
                                const TvInpaintConfig& cfg) {
  check_shape(partial, ops);
  require(partial.cols() == tops.num_steps(), ErrorKind::InvalidInput,
          "signal columns (" + std::to_string(partial.cols()) + ") != horizon (" +
              std::to_string(tops.num_steps()) + ")");
  require(known.rows() == partial.rows() && known.cols() == partial.cols(),
          ErrorKind::InvalidInput, "known mask shape differs from the signal");
  require(cfg.smoothing_a > 0.0 && cfg.max_iters >= 1 && cfg.tol > 0.0,
          ErrorKind::InvalidInput, "TV smoothing, iterations and tolerance must be positive");
  require(known.count() > 0, ErrorKind::InvalidInput, "no known entries to inpaint from");

  double sum = 0.0;
  double sum_sq = 0.0;
  Index count = 0;
  for (Index j = 0; j < known.cols(); ++j)
    for (Index i = 0; i < known.rows(); ++i)
      if (known(i, j)) {
        const double v = partial(i, j);
        require(std::isfinite(v), ErrorKind::InvalidInput, "non-finite known value");
        sum += v;
        sum_sq += v * v;
        ++count;
      }
  const double mean = sum / static_cast<double>(count);
  const double rms = std::sqrt(sum_sq / static_cast<double>(count));
  // a is relative to the data scale; an all-zero block falls back to absolute.
  const double a = cfg.smoothing_a * (rms > 0.0 ? rms : 1.0);

  ReconstructionResult res;
  Eigen::MatrixXd x = known.select(partial, Eigen::MatrixXd::Constant(partial.rows(), partial.cols(), mean));
  const Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  Eigen::MatrixXd g;
  double f = tv_objective(x, ops, a, g);
  g = known.select(zeros, g);
  res.objective_trace.push_back(f);

  double step = cfg.initial_step > 0.0 ? cfg.initial_step : 1e-2 * a;
  if (known.all()) {
    res.x_hat = x;
    res.converged = true;
    return res;
  }
  Eigen::MatrixXd xn;
  Eigen::MatrixXd gn;
  for (int k = 0; k < cfg.max_iters; ++k) {
    res.iterations = k + 1;
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) {
      res.converged = true;
      break;
    }
    // Armijo backtracking from the Barzilai-Borwein trial step.
    double fn = 0.0;
    bool accepted = false;
    while (step > 1e-20 * a) {
      xn = x - step * g;
      fn = tv_objective(xn, ops, a, gn);
      if (fn <= f - 1e-4 * step * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.converged = true;  // no representable descent left
      break;
    }
    gn = known.select(zeros, gn);
    const double sy = (xn - x).cwiseProduct(gn - g).sum();
    const double ss = (xn - x).squaredNorm();
    step = sy > 0.0 ? ss / sy : 2.0 * step;
    x.swap(xn);
    g.swap(gn);
    const double prev = f;
    f = fn;
    res.objective_trace.push_back(f);
    if (prev - f <= cfg.tol * std::abs(f)) {
      res.converged = true;
      break;
    }
  }
  res.x_hat = std::move(x);
  return res;
}

ReconstructionResult tv_inpaint(const Eigen::MatrixXd& partial, const std::vector<Index>& rows,
                                const std::vector<Index>& cols, const GraphOperators& ops,
                                const TimeOperators& tops, const TvInpaintConfig& cfg) {
  BoolMatrix known = BoolMatrix::Constant(partial.rows(), partial.cols(), false);
  for (Index i : rows) {
    require(i >= 0 && i < partial.rows(), ErrorKind::OutOfRange, "known row out of range");
    for (Index j : cols) {
      require(j >= 0 && j < partial.cols(), ErrorKind::OutOfRange, "known column out of range");
      known(i, j) = true;
    }
  }
  return tv_inpaint(partial, known, ops, tops, cfg);
}

}  // namespace tvgs
