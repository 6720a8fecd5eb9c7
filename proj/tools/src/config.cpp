#include "config.hpp"

#include "tvgs/error.hpp"

#include <json.hpp>

#include <initializer_list>
#include <string>

namespace tvgs::cli {

namespace {

using Json = nlohmann::json;

void check_keys(const Json& obj, std::string_view where, std::initializer_list<std::string_view> keys) {
  require(obj.is_object(), ErrorKind::InvalidInput, std::string(where) + " must be a JSON object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (std::string_view key : keys) known = known || key == k;
    require(known, ErrorKind::InvalidInput, "unknown key '" + k + "' in " + std::string(where));
  }
}

template <typename T>
void read(const Json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  if constexpr (std::is_integral_v<T>) {
    require(v.is_number_integer(), ErrorKind::InvalidInput,
            std::string("'") + key + "' must be an integer");
  } else {
    require(v.is_number(), ErrorKind::InvalidInput, std::string("'") + key + "' must be a number");
  }
  out = v.get<T>();
}

}  // namespace

ParsedConfig parse_config(std::string_view json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "config",
             {"joint", "completion", "tv", "svt", "tnnr", "ratios", "methods", "trials"});
  ParsedConfig cfg;
  SolverConfigs& s = cfg.solvers;
  if (root.contains("joint")) {
    const Json& j = root["joint"];
    check_keys(j, "joint",
               {"gamma_g", "gamma_t", "max_iters", "obj_tol", "weight_eps", "inner_iters", "penalty"});
    read(j, "gamma_g", s.joint.gamma_g);
    read(j, "gamma_t", s.joint.gamma_t);
    read(j, "max_iters", s.joint.max_iters);
    read(j, "obj_tol", s.joint.obj_tol);
    read(j, "weight_eps", s.joint.weight_eps);
    read(j, "inner_iters", s.joint.inner_iters);
    read(j, "penalty", s.joint.penalty);
  }
  if (root.contains("completion")) {
    const Json& j = root["completion"];
    check_keys(j, "completion", {"max_iters", "tol", "penalty"});
    read(j, "max_iters", s.two_stage.completion.max_iters);
    read(j, "tol", s.two_stage.completion.tol);
    read(j, "penalty", s.two_stage.completion.penalty);
  }
  if (root.contains("tv")) {
    const Json& j = root["tv"];
    check_keys(j, "tv", {"smoothing_a", "max_iters", "tol", "initial_step"});
    read(j, "smoothing_a", s.two_stage.tv.smoothing_a);
    read(j, "max_iters", s.two_stage.tv.max_iters);
    read(j, "tol", s.two_stage.tv.tol);
    read(j, "initial_step", s.two_stage.tv.initial_step);
  }
  if (root.contains("svt")) {
    const Json& j = root["svt"];
    check_keys(j, "svt", {"tau", "step", "max_iters", "tol"});
    read(j, "tau", s.svt.tau);
    read(j, "step", s.svt.step);
    read(j, "max_iters", s.svt.max_iters);
    read(j, "tol", s.svt.tol);
  }
  if (root.contains("tnnr")) {
    const Json& j = root["tnnr"];
    check_keys(j, "tnnr", {"trunc_rank", "lambda", "max_iters", "inner_iters", "tol"});
    read(j, "trunc_rank", s.tnnr.trunc_rank);
    read(j, "lambda", s.tnnr.lambda);
    read(j, "max_iters", s.tnnr.max_iters);
    read(j, "inner_iters", s.tnnr.inner_iters);
    read(j, "tol", s.tnnr.tol);
  }
  if (root.contains("ratios")) {
    const Json& r = root["ratios"];
    require(r.is_array(), ErrorKind::InvalidInput, "'ratios' must be an array of pairs");
    for (const Json& p : r) {
      require(p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number(),
              ErrorKind::InvalidInput, "'ratios' entries must be [rho_rc, rho_sub]");
      cfg.ratios.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  if (root.contains("methods")) {
    const Json& m = root["methods"];
    require(m.is_array(), ErrorKind::InvalidInput, "'methods' must be an array of names");
    for (const Json& name : m) {
      require(name.is_string(), ErrorKind::InvalidInput, "'methods' entries must be strings");
      cfg.methods.push_back(method_from_string(name.get<std::string>()));
    }
  }
  read(root, "trials", cfg.trials);
  return cfg;
}

}  // namespace tvgs::cli
