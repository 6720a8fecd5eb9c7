#pragma once

// `key=value,...` option strings used by several subcommands.

#include "tvgs/evaluation.hpp"
#include "tvgs/sampling.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace tvgs::cli {

std::map<std::string, std::string> parse_kv(std::string_view text);

/// Keys: n, t, r, kg, kt, graph (cycle | path | knn), k (neighbours for knn),
/// graph_seed. Unset keys take the defaults passed in.
struct SyntheticOptions {
  Index n = 60;
  Index t = 80;
  Index r = 3;
  Index kg = 3;
  Index kt = 3;
  std::string graph = "knn";
  Index k = 5;
  std::optional<std::uint64_t> graph_seed;
};

SyntheticOptions parse_synthetic(std::string_view text, SyntheticOptions defaults = {});

/// Builds the vertex graph; knn graphs draw their points from graph_seed or,
/// when unset, from a sub-seed of `seed`.
VertexGraph make_graph(const SyntheticOptions& o, std::uint64_t seed);

GeneratorSpec make_generator(const SyntheticOptions& o, std::uint64_t seed);

/// "rc=0.8,sub=0.7" or "rows=..,cols=..,samples=..".
SamplingPlan parse_plan(std::string_view text);

}  // namespace tvgs::cli
