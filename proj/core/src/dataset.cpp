#include "tvgs/error.hpp"
#include "tvgs/evaluation.hpp"
#include "tvgs/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>

namespace tvgs {

Coordinates parse_coordinates_csv(std::string_view text) {
  Coordinates c;
  std::vector<std::pair<double, double>> pts;
  std::istringstream in{std::string(text)};
  std::string line;
  Index line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (header) {
      header = false;
      require(fields.size() == 3 && fields[0] == "sensor_id" && fields[1] == "lat" &&
                  fields[2] == "lon",
              ErrorKind::Data, "coordinates header must be 'sensor_id,lat,lon'");
      continue;
    }
    require(fields.size() == 3, ErrorKind::Data,
            "coordinates line " + std::to_string(line_no) + ": expected 3 fields");
    c.ids.emplace_back(fields[0]);
    pts.emplace_back(parse_double_field(fields[1]), parse_double_field(fields[2]));
  }
  require(!header, ErrorKind::Data, "coordinates file is empty");
  c.points.resize(static_cast<Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    c.points(static_cast<Index>(i), 0) = pts[i].first;
    c.points(static_cast<Index>(i), 1) = pts[i].second;
  }
  return c;
}

namespace {

// Symmetrized k-NN from a pairwise score where larger means closer.
// Returns (u, v) -> neighbour score for u < v.
template <typename Score>
std::map<std::pair<Index, Index>, double> knn_pairs(Index n, Index k, Score score) {
  std::map<std::pair<Index, Index>, double> pairs;
  std::vector<Index> order;
  for (Index i = 0; i < n; ++i) {
    order.clear();
    for (Index j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    const auto kk = static_cast<std::size_t>(std::min<Index>(k, n - 1));
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(),
                      [&](Index a, Index b) {
                        const double sa = score(i, a);
                        const double sb = score(i, b);
                        return sa != sb ? sa > sb : a < b;
                      });
    for (std::size_t q = 0; q < kk; ++q) {
      const Index j = order[q];
      pairs[{std::min(i, j), std::max(i, j)}] = score(i, j);
    }
  }
  return pairs;
}

}  // namespace

VertexGraph knn_gaussian_graph(const Eigen::MatrixXd& points, Index k) {
  const Index n = points.rows();
  require(n >= 2, ErrorKind::InvalidInput, "k-NN graph needs at least two points");
  require(k >= 1, ErrorKind::InvalidInput, "k must be >= 1");
  require(points.allFinite(), ErrorKind::InvalidInput, "coordinates must be finite");
  auto dist = [&](Index a, Index b) { return (points.row(a) - points.row(b)).norm(); };
  const auto pairs = knn_pairs(n, k, [&](Index a, Index b) { return -dist(a, b); });

  // sigma: mean distance from each point to its k nearest neighbours.
  double total = 0.0;
  Index count = 0;
  const Index kk = std::min<Index>(k, n - 1);
  for (Index i = 0; i < n; ++i) {
    std::vector<double> d;
    for (Index j = 0; j < n; ++j)
      if (j != i) d.push_back(dist(i, j));
    std::partial_sort(d.begin(), d.begin() + kk, d.end());
    for (Index q = 0; q < kk; ++q) total += d[static_cast<std::size_t>(q)];
    count += kk;
  }
  const double sigma = total / static_cast<double>(count);

  std::vector<Edge> edges;
  for (const auto& [uv, score] : pairs) {
    const double d = -score;
    const double w = sigma > 0.0 ? std::exp(-(d * d) / (sigma * sigma)) : 1.0;
    if (w > 0.0) edges.push_back({uv.first, uv.second, w});
  }
  return VertexGraph(n, std::move(edges));
}

VertexGraph correlation_knn_graph(const Eigen::MatrixXd& data, Index k) {
  const Index n = data.rows();
  require(n >= 2 && data.cols() >= 2, ErrorKind::InvalidInput,
          "correlation graph needs at least two rows and two columns");
  require(k >= 1, ErrorKind::InvalidInput, "k must be >= 1");
  Eigen::MatrixXd centered = data.colwise() - data.rowwise().mean();
  const Eigen::VectorXd norms = centered.rowwise().norm();
  for (Index i = 0; i < n; ++i)
    if (norms(i) > 0.0) centered.row(i) /= norms(i);
  const Eigen::MatrixXd corr = (centered * centered.transpose()).cwiseAbs();
  const auto pairs = knn_pairs(n, k, [&](Index a, Index b) { return corr(a, b); });
  std::vector<Edge> edges;
  for (const auto& [uv, w] : pairs)
    if (w > 0.0 && std::isfinite(w)) edges.push_back({uv.first, uv.second, std::min(w, 1.0)});
  return VertexGraph(n, std::move(edges));
}

std::vector<Eigen::MatrixXd> split_windows(const Eigen::MatrixXd& data, Index window_len) {
  require(window_len >= 1, ErrorKind::InvalidInput, "window length must be >= 1");
  require(data.cols() >= window_len, ErrorKind::InvalidInput,
          "window length " + std::to_string(window_len) + " exceeds the " +
              std::to_string(data.cols()) + " available timesteps");
  std::vector<Eigen::MatrixXd> out;
  for (Index start = 0; start + window_len <= data.cols(); start += window_len)
    out.emplace_back(data.middleCols(start, window_len));
  return out;
}

Eigen::MatrixXd orient_sensor_matrix(const Eigen::MatrixXd& raw, Index num_sensors,
                                     bool* transposed) {
  bool flip = false;
  if (num_sensors > 0) {
    if (raw.rows() == num_sensors)
      flip = false;
    else if (raw.cols() == num_sensors)
      flip = true;
    else
      fail(ErrorKind::Data, "neither dimension of the " + std::to_string(raw.rows()) + "x" +
                                std::to_string(raw.cols()) + " dataset matches " +
                                std::to_string(num_sensors) + " sensors");
  } else {
    flip = raw.rows() > raw.cols();
  }
  if (transposed != nullptr) *transposed = flip;
  return flip ? Eigen::MatrixXd(raw.transpose()) : raw;
}

Dataset ingest_dataset(const std::string& path, const DatasetOptions& opt) {
  Dataset ds;
  const Eigen::MatrixXd raw = read_matrix_csv(path);
  const Eigen::MatrixXd data = orient_sensor_matrix(raw, opt.num_sensors, &ds.transposed);
  require(data.cols() >= opt.window_len, ErrorKind::Data,
          "window length " + std::to_string(opt.window_len) + " exceeds the " +
              std::to_string(data.cols()) + " timesteps in " + path);
  if (!opt.coordinates_path.empty()) {
    const Coordinates c = parse_coordinates_csv(read_text_file(opt.coordinates_path));
    require(c.points.rows() == data.rows(), ErrorKind::Data,
            "coordinates list " + std::to_string(c.points.rows()) + " sensors, data has " +
                std::to_string(data.rows()));
    ds.graph = knn_gaussian_graph(c.points, opt.knn_k);
  } else {
    ds.graph = correlation_knn_graph(data, opt.knn_k);
  }
  const TimeHorizon horizon{opt.window_len};
  for (Eigen::MatrixXd& w : split_windows(data, opt.window_len))
    ds.windows.emplace_back(std::move(w), ds.graph, horizon);
  return ds;
}

}  // namespace tvgs
