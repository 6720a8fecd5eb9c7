#include "synthetic.hpp"

#include "tvgs/error.hpp"
#include "tvgs/io.hpp"

#include <charconv>
#include <string>

namespace tvgs::cli {

namespace {

Index to_index(const std::string& key, const std::string& v) {
  Index out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  require(ec == std::errc() && ptr == v.data() + v.size(), ErrorKind::InvalidInput,
          "'" + key + "' expects an integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    return parse_double_field(v);
  } catch (const Error&) {
    fail(ErrorKind::InvalidInput, "'" + key + "' expects a number, got '" + v + "'");
  }
}

}  // namespace

std::map<std::string, std::string> parse_kv(std::string_view text) {
  std::map<std::string, std::string> out;
  for (std::string_view field : split_csv_line(text)) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    require(eq != std::string_view::npos && eq > 0, ErrorKind::InvalidInput,
            "expected key=value, got '" + std::string(field) + "'");
    out[std::string(field.substr(0, eq))] = std::string(field.substr(eq + 1));
  }
  return out;
}

SyntheticOptions parse_synthetic(std::string_view text, SyntheticOptions o) {
  for (const auto& [k, v] : parse_kv(text)) {
    if (k == "n") o.n = to_index(k, v);
    else if (k == "t") o.t = to_index(k, v);
    else if (k == "r") o.r = to_index(k, v);
    else if (k == "kg") o.kg = to_index(k, v);
    else if (k == "kt") o.kt = to_index(k, v);
    else if (k == "k") o.k = to_index(k, v);
    else if (k == "graph") o.graph = v;
    else if (k == "graph_seed") o.graph_seed = static_cast<std::uint64_t>(to_index(k, v));
    else fail(ErrorKind::InvalidInput, "unknown synthetic key '" + k + "'");
  }
  require(o.graph == "cycle" || o.graph == "path" || o.graph == "knn", ErrorKind::InvalidInput,
          "graph must be cycle, path or knn");
  return o;
}

VertexGraph make_graph(const SyntheticOptions& o, std::uint64_t seed) {
  if (o.graph == "cycle") return cycle_graph(o.n);
  if (o.graph == "path") return path_graph(o.n);
  return random_geometric_graph(o.n, o.k, o.graph_seed ? *o.graph_seed : mix_seed(seed, 0x67726170ULL));
}

GeneratorSpec make_generator(const SyntheticOptions& o, std::uint64_t seed) {
  return GeneratorSpec{make_graph(o, seed), o.t, SynthSpec{o.r, o.kg, o.kt}};
}

SamplingPlan parse_plan(std::string_view text) {
  const auto kv = parse_kv(text);
  if (kv.count("rc") || kv.count("sub")) {
    require(kv.size() == 2 && kv.count("rc") && kv.count("sub"), ErrorKind::InvalidInput,
            "ratio plan needs exactly rc=..,sub=..");
    return SamplingPlan::from_ratios(to_double("rc", kv.at("rc")), to_double("sub", kv.at("sub")));
  }
  require(kv.size() == 3 && kv.count("rows") && kv.count("cols") && kv.count("samples"),
          ErrorKind::InvalidInput, "plan must be rc=..,sub=.. or rows=..,cols=..,samples=..");
  return SamplingPlan::from_counts(to_index("rows", kv.at("rows")), to_index("cols", kv.at("cols")),
                                   to_index("samples", kv.at("samples")));
}

}  // namespace tvgs::cli
