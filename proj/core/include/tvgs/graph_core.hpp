#pragma once

// Graph and temporal operators for finite time-vertex graph signals.
//
// A signal is an N x T real matrix X: row i is the time series on vertex i,
// column j is the graph signal at time j. The vertex graph contributes the
// weighted incidence matrix Q (one column per edge) and the Laplacian
// L = Q Q^T; the time axis contributes forward-difference matrices D1, D2 and
// the unitary DFT basis.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace tvgs {

using Index = Eigen::Index;

struct Edge {
  Index u = 0;
  Index v = 0;
  double weight = 1.0;
};

/// Undirected weighted graph. Edges are stored with u < v; the orientation
/// used for the incidence matrix is tail = u (the lower index).
class VertexGraph {
 public:
  VertexGraph() = default;

  /// Edges given as (v, u) are flipped to (u, v). Self loops, duplicate
  /// edges, non-positive weights and out-of-range endpoints are rejected.
  VertexGraph(Index num_vertices, std::vector<Edge> edges);

  Index num_vertices() const noexcept { return num_vertices_; }
  Index num_edges() const noexcept { return static_cast<Index>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

 private:
  Index num_vertices_ = 0;
  std::vector<Edge> edges_;
};

struct TimeHorizon {
  Index num_steps = 0;
};

struct GraphOperators {
  Eigen::MatrixXd incidence;   // N x M
  Eigen::MatrixXd laplacian;   // N x N, = incidence * incidence^T
  Eigen::MatrixXd gft_basis;   // N x N orthonormal, columns by ascending eigenvalue
  Eigen::VectorXd eigenvalues; // ascending
  std::vector<Edge> edges;
  std::vector<std::vector<Index>> incident_edges;  // per vertex, edge column ids

  Index num_vertices() const noexcept { return laplacian.rows(); }
  Index num_edges() const noexcept { return incidence.cols(); }
};

struct TimeOperators {
  Eigen::MatrixXd d1;          // T x (T-1)
  Eigen::MatrixXd d2;          // T x (T-2)
  Eigen::MatrixXcd dft_basis;  // T x T unitary

  Index num_steps() const noexcept { return d1.rows(); }
};

VertexGraph path_graph(Index num_vertices, double weight = 1.0);
VertexGraph cycle_graph(Index num_vertices, double weight = 1.0);

GraphOperators build_operators(const VertexGraph& graph);

/// Requires T >= 3 so that D2 is nonempty.
TimeOperators build_time_operators(TimeHorizon horizon);

/// Column j: -1 at row j, +1 at row j+1. Requires T >= 2.
Eigen::MatrixXd first_difference(Index num_steps);
/// Column j: [1, -2, 1] at rows j..j+2. Requires T >= 3.
Eigen::MatrixXd second_difference(Index num_steps);
/// Entry (t, k) = exp(-2 pi i t k / T) / sqrt(T). Requires T >= 1.
Eigen::MatrixXcd dft_basis(Index num_steps);

/// X(:, j)^T L X(:, j).
double graph_total_variation(const Eigen::MatrixXd& x, const GraphOperators& ops, Index j);

/// Euclidean norm of the joint gradient at (i, j): the graph differences
/// (Q^T X)(e, j) over the edges e incident to vertex i stacked with the
/// temporal difference X(i, j+1) - X(i, j). The temporal entry is absent
/// at the last column.
double joint_gradient_norm(const Eigen::MatrixXd& x, const GraphOperators& ops,
                           const TimeOperators& tops, Index i, Index j);

/// Smallest C with max{|X(:,j)^T L X(:,j)|, ||grad X(i,j)||, |X D2 (i,j)|} <= C
/// over all valid (i, j).
double smoothness_constant(const Eigen::MatrixXd& x, const GraphOperators& ops,
                           const TimeOperators& tops);

}  // namespace tvgs
