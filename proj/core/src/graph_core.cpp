#include "tvgs/graph_core.hpp"

#include "tvgs/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <string>
#include <utility>

namespace tvgs {

namespace {

void check_dims(const Eigen::MatrixXd& x, const GraphOperators& ops) {
  require(x.rows() == ops.num_vertices(), ErrorKind::InvalidInput,
          "signal has " + std::to_string(x.rows()) + " rows but graph has " +
              std::to_string(ops.num_vertices()) + " vertices");
}

void check_dims(const Eigen::MatrixXd& x, const GraphOperators& ops, const TimeOperators& tops) {
  check_dims(x, ops);
  require(x.cols() == tops.num_steps(), ErrorKind::InvalidInput,
          "signal has " + std::to_string(x.cols()) + " columns but horizon is " +
              std::to_string(tops.num_steps()));
}

// Flip each column so that its first entry of non-negligible magnitude is positive.
void fix_column_signs(Eigen::MatrixXd& basis) {
  for (Index c = 0; c < basis.cols(); ++c) {
    const double scale = basis.col(c).cwiseAbs().maxCoeff();
    if (scale == 0.0) continue;
    for (Index r = 0; r < basis.rows(); ++r) {
      if (std::abs(basis(r, c)) > 1e-10 * scale) {
        if (basis(r, c) < 0.0) basis.col(c) *= -1.0;
        break;
      }
    }
  }
}

}  // namespace

VertexGraph::VertexGraph(Index num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  require(num_vertices_ > 0, ErrorKind::InvalidInput, "graph must have at least one vertex");
  std::set<std::pair<Index, Index>> seen;
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    require(e.u >= 0 && e.v < num_vertices_, ErrorKind::InvalidInput,
            "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                ") references a vertex outside [0, " + std::to_string(num_vertices_) + ")");
    require(e.u != e.v, ErrorKind::InvalidInput, "self loop at vertex " + std::to_string(e.u));
    require(std::isfinite(e.weight) && e.weight > 0.0, ErrorKind::InvalidInput,
            "edge weights must be finite and strictly positive");
    require(seen.emplace(e.u, e.v).second, ErrorKind::InvalidInput,
            "duplicate edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
  }
}

VertexGraph path_graph(Index num_vertices, double weight) {
  std::vector<Edge> edges;
  for (Index i = 0; i + 1 < num_vertices; ++i) edges.push_back({i, i + 1, weight});
  return VertexGraph(num_vertices, std::move(edges));
}

VertexGraph cycle_graph(Index num_vertices, double weight) {
  require(num_vertices >= 3, ErrorKind::InvalidInput, "a cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Index i = 0; i + 1 < num_vertices; ++i) edges.push_back({i, i + 1, weight});
  edges.push_back({0, num_vertices - 1, weight});
  return VertexGraph(num_vertices, std::move(edges));
}

GraphOperators build_operators(const VertexGraph& graph) {
  const Index n = graph.num_vertices();
  require(n > 0, ErrorKind::InvalidInput, "empty graph");
  const Index m = graph.num_edges();

  GraphOperators ops;
  ops.edges = graph.edges();
  ops.incidence = Eigen::MatrixXd::Zero(n, m);
  ops.incident_edges.assign(static_cast<std::size_t>(n), {});
  for (Index e = 0; e < m; ++e) {
    const Edge& edge = ops.edges[static_cast<std::size_t>(e)];
    const double s = std::sqrt(edge.weight);
    ops.incidence(edge.u, e) = s;
    ops.incidence(edge.v, e) = -s;
    ops.incident_edges[static_cast<std::size_t>(edge.u)].push_back(e);
    ops.incident_edges[static_cast<std::size_t>(edge.v)].push_back(e);
  }
  ops.laplacian = ops.incidence * ops.incidence.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ops.laplacian);
  require(eig.info() == Eigen::Success, ErrorKind::InvalidInput,
          "Laplacian eigendecomposition failed");
  ops.eigenvalues = eig.eigenvalues();
  ops.gft_basis = eig.eigenvectors();
  fix_column_signs(ops.gft_basis);
  return ops;
}

Eigen::MatrixXd first_difference(Index num_steps) {
  require(num_steps >= 2, ErrorKind::InvalidInput, "first difference needs T >= 2");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(num_steps, num_steps - 1);
  for (Index j = 0; j + 1 < num_steps; ++j) {
    d(j, j) = -1.0;
    d(j + 1, j) = 1.0;
  }
  return d;
}

Eigen::MatrixXd second_difference(Index num_steps) {
  require(num_steps >= 3, ErrorKind::InvalidInput, "second difference needs T >= 3");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(num_steps, num_steps - 2);
  for (Index j = 0; j + 2 < num_steps; ++j) {
    d(j, j) = 1.0;
    d(j + 1, j) = -2.0;
    d(j + 2, j) = 1.0;
  }
  return d;
}

Eigen::MatrixXcd dft_basis(Index num_steps) {
  require(num_steps >= 1, ErrorKind::InvalidInput, "DFT needs T >= 1");
  const double norm = 1.0 / std::sqrt(static_cast<double>(num_steps));
  const double w = -2.0 * std::numbers::pi / static_cast<double>(num_steps);
  Eigen::MatrixXcd f(num_steps, num_steps);
  for (Index t = 0; t < num_steps; ++t) {
    for (Index k = 0; k < num_steps; ++k) {
      // reduce t*k mod T first so the phase stays accurate for large T
      const auto phase = static_cast<double>((t * k) % num_steps);
      f(t, k) = std::polar(norm, w * phase);
    }
  }
  return f;
}

TimeOperators build_time_operators(TimeHorizon horizon) {
  require(horizon.num_steps >= 3, ErrorKind::InvalidInput,
          "time horizon must have T >= 3, got " + std::to_string(horizon.num_steps));
  return {first_difference(horizon.num_steps), second_difference(horizon.num_steps),
          dft_basis(horizon.num_steps)};
}

double graph_total_variation(const Eigen::MatrixXd& x, const GraphOperators& ops, Index j) {
  check_dims(x, ops);
  require(j >= 0 && j < x.cols(), ErrorKind::OutOfRange, "column index out of range");
  const auto col = x.col(j);
  // Summed edge-wise so rounding can never make the result negative.
  double tv = 0.0;
  for (const Edge& e : ops.edges) {
    const double d = col(e.u) - col(e.v);
    tv += e.weight * d * d;
  }
  return tv;
}

double joint_gradient_norm(const Eigen::MatrixXd& x, const GraphOperators& ops,
                           const TimeOperators& tops, Index i, Index j) {
  check_dims(x, ops, tops);
  require(i >= 0 && i < x.rows() && j >= 0 && j < x.cols(), ErrorKind::OutOfRange,
          "gradient index out of range");
  double sq = 0.0;
  for (Index e : ops.incident_edges[static_cast<std::size_t>(i)]) {
    const Edge& edge = ops.edges[static_cast<std::size_t>(e)];
    const double g = std::sqrt(edge.weight) * (x(edge.u, j) - x(edge.v, j));
    sq += g * g;
  }
  if (j + 1 < x.cols()) {
    const double dt = x(i, j + 1) - x(i, j);
    sq += dt * dt;
  }
  return std::sqrt(sq);
}

double smoothness_constant(const Eigen::MatrixXd& x, const GraphOperators& ops,
                           const TimeOperators& tops) {
  check_dims(x, ops, tops);
  double c = 0.0;
  for (Index j = 0; j < x.cols(); ++j) {
    c = std::max(c, graph_total_variation(x, ops, j));
    for (Index i = 0; i < x.rows(); ++i) {
      c = std::max(c, joint_gradient_norm(x, ops, tops, i, j));
      if (j + 2 < x.cols()) c = std::max(c, std::abs(x(i, j) - 2.0 * x(i, j + 1) + x(i, j + 2)));
    }
  }
  return c;
}

}  // namespace tvgs
