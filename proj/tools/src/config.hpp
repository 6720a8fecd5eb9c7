#pragma once

// JSON solver/experiment configuration. Unknown keys and wrong types are
// rejected with InvalidInput so typos do not silently fall back to defaults.

#include "tvgs/evaluation.hpp"
#include "tvgs/reconstruction.hpp"

#include <string_view>

namespace tvgs::cli {

struct SolverConfigs {
  JointSolverConfig joint;
  TwoStageConfig two_stage;
  SvtConfig svt;
  TnnrConfig tnnr;
};

/// Schema (every key optional):
///   {"joint": {gamma_g, gamma_t, max_iters, obj_tol, weight_eps, inner_iters, penalty},
///    "completion": {max_iters, tol, penalty},
///    "tv": {smoothing_a, max_iters, tol, initial_step},
///    "svt": {tau, step, max_iters, tol},
///    "tnnr": {trunc_rank, lambda, max_iters, inner_iters, tol},
///    "ratios": [[rho_rc, rho_sub], ...], "methods": [name, ...], "trials": n}
/// The last three keys only apply to `experiment`.
struct ParsedConfig {
  SolverConfigs solvers;
  std::vector<RatioSetting> ratios;
  std::vector<Method> methods;
  Index trials = 0;
};

ParsedConfig parse_config(std::string_view json_text);

}  // namespace tvgs::cli
