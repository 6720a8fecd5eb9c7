#pragma once

// Text formats: dense matrix CSV (row-major, no header), graph edge lists
// (header `u,v,weight`), and the fixed 17-significant-digit float format.

#include "tvgs/graph_core.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tvgs {

std::string format_double(double v);

Eigen::MatrixXd parse_matrix_csv(std::istream& in);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

/// Vertex count defaults to 1 + the largest index seen.
VertexGraph parse_edge_list_csv(std::istream& in, std::optional<Index> num_vertices = {});
VertexGraph read_edge_list_csv(const std::filesystem::path& path,
                               std::optional<Index> num_vertices = {});
void write_edge_list_csv(std::ostream& out, const VertexGraph& graph);
void write_edge_list_csv(const std::filesystem::path& path, const VertexGraph& graph);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Splits one CSV line on commas and trims surrounding whitespace.
std::vector<std::string_view> split_csv_line(std::string_view line);
/// Strict double parse of a full field; throws Data on failure.
double parse_double_field(std::string_view field);

}  // namespace tvgs
