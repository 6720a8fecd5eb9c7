#include "tvgs/io.hpp"

#include "tvgs/error.hpp"
#include "tvgs/sampling.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tvgs {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

Index parse_index_field(std::string_view field) {
  long long v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  require(ec == std::errc() && ptr == end, ErrorKind::Data,
          "not an integer: '" + std::string(field) + "'");
  return static_cast<Index>(v);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Data, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Data, "cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return {buf, static_cast<std::size_t>(len)};
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double_field(std::string_view field) {
  double v = 0.0;
  const auto* begin = field.data();
  const auto* end = begin + field.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  require(ec == std::errc() && ptr == end && !field.empty(), ErrorKind::Data,
          "not a number: '" + std::string(field) + "'");
  return v;
}

Eigen::MatrixXd parse_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (auto field : split_csv_line(line)) {
      const double v = parse_double_field(field);
      require(std::isfinite(v), ErrorKind::Data,
              "non-finite value on line " + std::to_string(line_no));
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(ErrorKind::Data, "ragged CSV: line " + std::to_string(line_no) + " has " +
                                std::to_string(row.size()) + " fields, expected " +
                                std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorKind::Data, "empty matrix CSV");
  Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path);
  write_matrix_csv(out, m);
}

VertexGraph parse_edge_list_csv(std::istream& in, std::optional<Index> num_vertices) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::Data, "empty edge list");
  const auto header = split_csv_line(line);
  require(header.size() == 3 && header[0] == "u" && header[1] == "v" && header[2] == "weight",
          ErrorKind::Data, "edge list header must be 'u,v,weight'");

  std::vector<Edge> edges;
  Index max_index = -1;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    require(f.size() == 3, ErrorKind::Data, "edge line needs 3 fields: '" + line + "'");
    Edge e{parse_index_field(f[0]), parse_index_field(f[1]), parse_double_field(f[2])};
    max_index = std::max({max_index, e.u, e.v});
    edges.push_back(e);
  }
  const Index n = num_vertices.value_or(max_index + 1);
  try {
    return VertexGraph(n, std::move(edges));
  } catch (const Error& e) {
    fail(ErrorKind::Data, e.what());
  }
}

VertexGraph read_edge_list_csv(const std::filesystem::path& path,
                               std::optional<Index> num_vertices) {
  auto in = open_in(path);
  return parse_edge_list_csv(in, num_vertices);
}

void write_edge_list_csv(std::ostream& out, const VertexGraph& graph) {
  out << "u,v,weight\n";
  for (const auto& e : graph.edges()) out << e.u << ',' << e.v << ',' << format_double(e.weight) << '\n';
}

void write_edge_list_csv(const std::filesystem::path& path, const VertexGraph& graph) {
  auto out = open_out(path);
  write_edge_list_csv(out, graph);
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  auto out = open_out(path);
  out << text;
}

// SampleSet JSON lives here so nlohmann stays out of the public headers.

std::string to_json(const SampleSet& s) {
  nlohmann::ordered_json j;
  j["seed"] = s.seed;
  j["rows"] = s.rows;
  j["cols"] = s.cols;
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : s.entries) entries.push_back({e.row, e.col});
  j["entries"] = std::move(entries);
  j["values"] = s.values;
  return j.dump();
}

SampleSet sample_set_from_json(std::string_view text) {
  SampleSet s;
  try {
    const auto j = nlohmann::json::parse(text);
    s.seed = j.at("seed").get<std::uint64_t>();
    s.rows = j.at("rows").get<std::vector<Index>>();
    s.cols = j.at("cols").get<std::vector<Index>>();
    for (const auto& e : j.at("entries")) {
      require(e.is_array() && e.size() == 2, ErrorKind::Data, "entries must be [i, j] pairs");
      s.entries.push_back({e[0].get<Index>(), e[1].get<Index>()});
    }
    s.values = j.at("values").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Data, std::string("malformed sample set JSON: ") + e.what());
  }
  require(s.values.size() == s.entries.size(), ErrorKind::Data,
          "sample set has " + std::to_string(s.entries.size()) + " entries but " +
              std::to_string(s.values.size()) + " values");
  return s;
}

}  // namespace tvgs
