// tvgs: command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 solver did not
// converge (the partial result is still written).

#include "config.hpp"
#include "synthetic.hpp"

#include "tvgs/error.hpp"
#include "tvgs/evaluation.hpp"
#include "tvgs/graph_core.hpp"
#include "tvgs/io.hpp"
#include "tvgs/reconstruction.hpp"
#include "tvgs/sampling.hpp"
#include "tvgs/signal_model.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace tvgs;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNotConverged = 3;

// --- synth -------------------------------------------------------------------

struct SynthArgs {
  std::string synthetic;
  std::string graph_file;
  std::string out;
  std::string graph_out;
};

int cmd_synth(const SynthArgs& a, std::uint64_t seed) {
  const cli::SyntheticOptions o = cli::parse_synthetic(a.synthetic);
  const VertexGraph graph = a.graph_file.empty() ? cli::make_graph(o, seed)
                                                 : read_edge_list_csv(a.graph_file);
  const Ftvgs x = synth_ftvgs(graph, TimeHorizon{o.t}, SynthSpec{o.r, o.kg, o.kt}, seed);
  write_matrix_csv(a.out, x.data());
  if (!a.graph_out.empty()) write_edge_list_csv(a.graph_out, graph);
  const IncoherenceProfile p = incoherence(x);
  std::cout << "vertices " << x.num_vertices() << "\nsteps " << x.num_steps() << "\nrank "
            << p.rank << "\nmu1 " << format_double(p.mu1) << "\nmu2 " << format_double(p.mu2)
            << "\nkappa " << format_double(p.kappa) << "\nsmoothness_c "
            << format_double(p.smoothness_c) << '\n';
  return kExitOk;
}

// --- sample ------------------------------------------------------------------

struct SampleArgs {
  std::string input;
  std::string plan = "rc=1.0,sub=1.0";
  std::string footprint = "subset";
  Index count = 0;
  std::string out;
};

int cmd_sample(const SampleArgs& a, std::uint64_t seed) {
  const Eigen::MatrixXd x = read_matrix_csv(a.input);
  SampleSet s;
  if (a.footprint == "subset") {
    s = subset_random_sample(x, cli::parse_plan(a.plan), seed);
  } else if (a.footprint == "mc") {
    require(a.count >= 1, ErrorKind::InvalidInput, "--count is required for the mc footprint");
    s = mc_uniform_sample(x, a.count, seed);
  } else if (a.footprint == "ccs") {
    s = ccs_sample(x, cli::parse_plan(a.plan), seed).samples;
  } else if (a.footprint == "full") {
    s = full_observation(x);
  } else {
    fail(ErrorKind::InvalidInput, "--footprint must be subset, mc, ccs or full");
  }
  write_text_file(a.out, to_json(s));
  std::cout << "rows " << s.rows.size() << "\ncols " << s.cols.size() << "\nsamples " << s.size()
            << "\ndistinct " << s.distinct_count() << '\n';
  return kExitOk;
}

// --- bounds ------------------------------------------------------------------

struct BoundsArgs {
  std::optional<Index> r;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double kappa = 1.0;
  Index n = 0;
  Index t = 0;
  double delta = 0.1;
  double eps = 0.5;
  double eta = 0.0;
  double beta = 2.0;
  Index rows = 0;
  Index cols = 0;
  std::string input;
  bool json = false;
};

int cmd_bounds(BoundsArgs a) {
  BoundInputs in;
  if (!a.input.empty()) {
    const Eigen::MatrixXd x = read_matrix_csv(a.input);
    const IncoherenceProfile p = incoherence(x);
    in.rank = p.rank;
    in.mu1 = p.mu1;
    in.mu2 = p.mu2;
    in.kappa = p.kappa;
    in.num_vertices = x.rows();
    in.num_steps = x.cols();
  } else {
    require(a.r.has_value(), ErrorKind::InvalidInput, "--r is required without --input");
    in.rank = *a.r;
    in.mu1 = a.mu1;
    in.mu2 = a.mu2;
    in.kappa = a.kappa;
  }
  if (a.r) in.rank = *a.r;
  in.delta = a.delta;
  in.epsilon = a.eps;
  in.eta = a.eta;
  in.beta = a.beta;
  in.rows = a.rows;
  in.cols = a.cols;
  // Without declared dimensions the lemma minimums are used unclamped.
  const Index min_rows = lemma1_min_rows(in.rank, in.mu1, in.delta, in.epsilon);
  const Index min_cols = lemma1_min_cols(in.rank, in.mu2, in.delta, in.epsilon);
  if (a.n > 0) in.num_vertices = a.n;
  if (a.t > 0) in.num_steps = a.t;
  if (a.input.empty() && a.n == 0) in.num_vertices = std::max(min_rows, a.rows);
  if (a.input.empty() && a.t == 0) in.num_steps = std::max(min_cols, a.cols);

  const BoundReport rep = bound_report(in);
  Json j;
  j["rank"] = in.rank;
  j["mu1"] = in.mu1;
  j["mu2"] = in.mu2;
  j["kappa"] = in.kappa;
  j["num_vertices"] = in.num_vertices;
  j["num_steps"] = in.num_steps;
  j["delta"] = in.delta;
  j["epsilon"] = in.epsilon;
  j["eta"] = in.eta;
  j["beta"] = in.beta;
  j["min_rows"] = rep.min_rows;
  j["min_cols"] = rep.min_cols;
  j["rows_used"] = rep.rows_used;
  j["cols_used"] = rep.cols_used;
  j["rows_exceed_dims"] = rep.rows_exceed_dims;
  j["min_samples_raw"] = rep.samples.raw;
  j["min_samples"] = rep.samples.min_samples;
  j["samples_vacuous"] = rep.samples.vacuous;
  j["rank_prob"] = rep.rank_prob;
  j["failure_p"] = rep.failure.p;
  j["failure_p_vacuous"] = rep.failure.vacuous;
  j["incoherence_prob"] = rep.incoherence_prob;
  j["recovery_prob_raw"] = rep.recovery_prob_raw;
  j["recovery_prob"] = rep.recovery_prob;
  j["recovery_vacuous"] = rep.recovery_vacuous;
  if (a.json) {
    std::cout << j.dump(2) << '\n';
  } else {
    for (const auto& [k, v] : j.items()) std::cout << k << ' ' << v.dump() << '\n';
  }
  return kExitOk;
}

// --- reconstruct --------------------------------------------------------------

struct ReconstructArgs {
  std::string samples;
  std::string graph;
  Index vertices = 0;
  Index steps = 0;
  std::string truth;
  std::string method = "joint";
  std::string config;
  std::string out;
  std::string report;
};

int cmd_reconstruct(const ReconstructArgs& a) {
  const SampleSet s = sample_set_from_json(read_text_file(a.samples));
  const cli::ParsedConfig cfg =
      a.config.empty() ? cli::ParsedConfig{} : cli::parse_config(read_text_file(a.config));
  std::optional<Eigen::MatrixXd> truth;
  if (!a.truth.empty()) truth = read_matrix_csv(a.truth);

  Index n = a.vertices;
  Index t = a.steps;
  if (truth) {
    if (n == 0) n = truth->rows();
    if (t == 0) t = truth->cols();
  }
  std::optional<VertexGraph> graph;
  if (!a.graph.empty()) {
    graph = read_edge_list_csv(a.graph, n > 0 ? std::optional<Index>(n) : std::nullopt);
    n = graph->num_vertices();
  }
  require(n > 0 && t > 0, ErrorKind::InvalidInput,
          "signal dimensions unknown: pass --truth, or --graph/--vertices and --steps");
  if (truth)
    require(truth->rows() == n && truth->cols() == t, ErrorKind::Data,
            "ground truth shape differs from the reconstruction frame");

  const Method m = method_from_string(a.method);
  ReconstructionResult res;
  if (m == Method::Joint || m == Method::TwoStage) {
    require(graph.has_value(), ErrorKind::InvalidInput, "--graph is required for " + a.method);
    const GraphOperators ops = build_operators(*graph);
    const TimeOperators tops = build_time_operators(TimeHorizon{t});
    res = m == Method::Joint ? solve_joint(s, ops, tops, cfg.solvers.joint)
                             : two_stage_reconstruct(s, ops, tops, cfg.solvers.two_stage);
  } else if (m == Method::Svt) {
    res = svt_baseline(s, n, t, cfg.solvers.svt);
  } else {
    res = tnnr_baseline(s, n, t, cfg.solvers.tnnr);
  }
  write_matrix_csv(a.out, res.x_hat);

  Json j;
  j["method"] = to_string(m);
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  j["max_constraint_violation"] = res.max_constraint_violation;
  j["objective_trace"] = res.objective_trace;
  if (truth) j["nrmse"] = nrmse(*truth, res.x_hat);
  const std::string report = j.dump(2) + "\n";
  if (!a.report.empty()) write_text_file(a.report, report);
  std::cout << "method " << to_string(m) << "\niterations " << res.iterations << "\nconverged "
            << (res.converged ? "true" : "false") << '\n';
  if (truth) std::cout << "nrmse " << format_double(j["nrmse"].get<double>()) << '\n';
  if (!res.converged) {
    std::cerr << "tvgs: solver stopped at the iteration cap before converging; result written\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

// --- verify --------------------------------------------------------------------

struct VerifyArgs {
  std::string synthetic;
  Index trials = 300;
  double delta = 0.1;
  double eps = 0.5;
  double eta = 0.5;
  Index rows = 0;
  Index cols = 0;
  std::string report;
};

const cli::SyntheticOptions kVerifyDefaults{200, 300, 3, 3, 3, "cycle", 5, std::nullopt};

int emit(const Json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (!path.empty()) write_text_file(path, text);
  std::cout << text;
  return kExitOk;
}

int cmd_verify_lemma1(const VerifyArgs& a, std::uint64_t seed) {
  const cli::SyntheticOptions o = cli::parse_synthetic(a.synthetic, kVerifyDefaults);
  Lemma1Options opt;
  opt.delta = a.delta;
  opt.epsilon = a.eps;
  opt.trials = a.trials;
  opt.seed = seed;
  opt.rows = a.rows;
  opt.cols = a.cols;
  const Lemma1Report r = verify_lemma1(cli::make_generator(o, seed), opt);
  Json j;
  j["trials"] = r.trials;
  j["rank"] = r.rank;
  j["mu1_max"] = r.mu1_max;
  j["mu2_max"] = r.mu2_max;
  j["rows"] = {r.rows_min, r.rows_max};
  j["cols"] = {r.cols_min, r.cols_max};
  j["clamped_trials"] = r.clamped_trials;
  j["fraction_rank_xr"] = r.fraction_r;
  j["floor_rank_xr"] = r.floor_r;
  j["allowance_rank_xr"] = r.allowance_r;
  j["pass_rank_xr"] = r.passes_r();
  j["fraction_rank_xrc"] = r.fraction_rc;
  j["floor_rank_xrc"] = r.floor_rc;
  j["allowance_rank_xrc"] = r.allowance_rc;
  j["pass_rank_xrc"] = r.passes_rc();
  return emit(j, a.report);
}

int cmd_verify_lemma2(const VerifyArgs& a, std::uint64_t seed) {
  const cli::SyntheticOptions o = cli::parse_synthetic(a.synthetic, kVerifyDefaults);
  Lemma2Options opt;
  opt.eta = a.eta;
  opt.trials = a.trials;
  opt.seed = seed;
  opt.rows = a.rows;
  opt.cols = a.cols;
  const Lemma2Report r = verify_lemma2(cli::make_generator(o, seed), opt);
  Json j;
  j["trials"] = r.trials;
  j["rank"] = r.rank;
  j["rows"] = r.rows;
  j["cols"] = r.cols;
  j["eta"] = a.eta;
  j["full_rank_trials"] = r.full_rank_trials;
  j["rank_deficient_trials"] = r.rank_deficient_trials;
  j["u_satisfied"] = r.u_satisfied;
  j["v_satisfied"] = r.v_satisfied;
  j["both_satisfied"] = r.both_satisfied;
  j["fraction_both"] = r.fraction_both;
  j["failure_p"] = r.failure.p;
  j["failure_p_vacuous"] = r.failure.vacuous;
  j["predicted_floor"] = r.floor;
  auto& per = j["per_trial"] = Json::array();
  for (const Lemma2Trial& t : r.per_trial)
    per.push_back({{"seed", t.seed},
                   {"full_rank", t.full_rank},
                   {"u_norm", t.u_norm},
                   {"u_bound", t.u_bound},
                   {"v_norm", t.v_norm},
                   {"v_bound", t.v_bound},
                   {"factor_gap", t.factor_gap}});
  return emit(j, a.report);
}

// --- experiment ------------------------------------------------------------------

struct ExperimentArgs {
  std::string grid;
  std::string ratios;
  std::string synthetic;
  std::string dataset;
  Index window = 512;
  Index sensors = 0;
  std::string coords;
  Index knn_k = 5;
  std::string methods;
  Index trials = 0;
  std::string config;
  std::string out_dir;
};

std::vector<RatioSetting> parse_ratio_list(const std::string& text) {
  std::vector<RatioSetting> out;
  for (std::string_view item : split_csv_line(text)) {
    const auto colon = item.find(':');
    require(colon != std::string_view::npos, ErrorKind::InvalidInput,
            "--ratios entries must look like rc:sub");
    out.push_back({parse_double_field(item.substr(0, colon)), parse_double_field(item.substr(colon + 1))});
  }
  return out;
}

int cmd_experiment(const ExperimentArgs& a, std::uint64_t seed) {
  const cli::ParsedConfig pc =
      a.config.empty() ? cli::ParsedConfig{} : cli::parse_config(read_text_file(a.config));
  ExperimentConfig cfg;
  cfg.base_seed = seed;
  cfg.joint = pc.solvers.joint;
  cfg.two_stage = pc.solvers.two_stage;
  cfg.svt = pc.solvers.svt;
  cfg.tnnr = pc.solvers.tnnr;

  if (!a.ratios.empty()) {
    cfg.ratios = parse_ratio_list(a.ratios);
  } else if (!pc.ratios.empty()) {
    cfg.ratios = pc.ratios;
  } else {
    require(a.grid.empty() || a.grid == "table2", ErrorKind::InvalidInput,
            "unknown --grid '" + a.grid + "' (only table2)");
    cfg.ratios = table2_ratios();
  }
  if (!a.methods.empty()) {
    for (std::string_view m : split_csv_line(a.methods)) cfg.methods.push_back(method_from_string(m));
  } else if (!pc.methods.empty()) {
    cfg.methods = pc.methods;
  } else {
    cfg.methods = {Method::Joint, Method::Svt, Method::Tnnr};
  }
  cfg.num_trials = a.trials > 0 ? a.trials : (pc.trials > 0 ? pc.trials : 1);

  SignalSource src;
  if (!a.dataset.empty()) {
    require(a.synthetic.empty(), ErrorKind::InvalidInput, "--dataset and --synthetic are exclusive");
    DatasetOptions dopt;
    dopt.window_len = a.window;
    dopt.num_sensors = a.sensors;
    dopt.coordinates_path = a.coords;
    dopt.knn_k = a.knn_k;
    Dataset ds = ingest_dataset(a.dataset, dopt);
    src.graph = ds.graph;
    src.num_steps = a.window;
    for (const Ftvgs& w : ds.windows) src.windows.push_back(w.data());
    std::cerr << "tvgs: " << ds.windows.size() << " windows of " << ds.graph.num_vertices() << "x"
              << a.window << (ds.transposed ? " (input transposed)" : "") << '\n';
  } else {
    cli::SyntheticOptions defaults;
    defaults.n = 207;
    defaults.t = 512;
    const cli::SyntheticOptions o = cli::parse_synthetic(a.synthetic, defaults);
    src.graph = cli::make_graph(o, seed);
    src.num_steps = o.t;
    src.synth = SynthSpec{o.r, o.kg, o.kt};
  }

  const ExperimentTable table = run_experiment_grid(cfg, src);
  if (!a.out_dir.empty()) {
    const std::filesystem::path dir(a.out_dir);
    std::filesystem::create_directories(dir);
    write_text_file(dir / "cells.csv", cells_csv(table));
    write_text_file(dir / "trials.csv", outcomes_csv(table));
    write_text_file(dir / "report.json", experiment_json(table));
    for (Method m : cfg.methods)
      write_text_file(dir / (std::string("plot_") + to_string(m) + ".dat"), plot_data(table, m));
  }
  std::cout << cells_csv(table);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subset random sampling and reconstruction of time-vertex graph signals"};
  app.require_subcommand(1);
  std::uint64_t seed = 42;
  app.add_option("--seed", seed, "Seed for every random draw (sub-seeds are derived)")
      ->capture_default_str();

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a smooth low-rank synthetic signal");
  c_synth->add_option("--synthetic", synth.synthetic,
                      "n=,t=,r=,kg=,kt=,graph=cycle|path|knn,k=,graph_seed=");
  c_synth->add_option("--graph-file", synth.graph_file, "Use this edge list instead")->check(CLI::ExistingFile);
  c_synth->add_option("--out", synth.out, "Signal CSV")->required();
  c_synth->add_option("--graph-out", synth.graph_out, "Write the vertex graph edge list");

  SampleArgs sample;
  auto* c_sample = app.add_subcommand("sample", "Draw a sample set from a signal");
  c_sample->add_option("--input", sample.input, "Signal CSV")->required()->check(CLI::ExistingFile);
  c_sample->add_option("--plan", sample.plan, "rc=,sub= or rows=,cols=,samples=")->capture_default_str();
  c_sample->add_option("--footprint", sample.footprint, "subset | mc | ccs | full")->capture_default_str();
  c_sample->add_option("--count", sample.count, "Draw count for the mc footprint");
  c_sample->add_option("--out", sample.out, "SampleSet JSON")->required();

  BoundsArgs bounds;
  auto* c_bounds = app.add_subcommand("bounds", "Evaluate the sample-complexity bounds");
  c_bounds->add_option("--r", bounds.r, "Rank");
  c_bounds->add_option("--mu1", bounds.mu1)->capture_default_str();
  c_bounds->add_option("--mu2", bounds.mu2)->capture_default_str();
  c_bounds->add_option("--kappa", bounds.kappa)->capture_default_str();
  c_bounds->add_option("--n", bounds.n, "Vertices N (default: unclamped)");
  c_bounds->add_option("--t", bounds.t, "Timesteps T (default: unclamped)");
  c_bounds->add_option("--delta", bounds.delta)->capture_default_str();
  c_bounds->add_option("--eps", bounds.eps)->capture_default_str();
  c_bounds->add_option("--eta", bounds.eta)->capture_default_str();
  c_bounds->add_option("--beta", bounds.beta)->capture_default_str();
  c_bounds->add_option("--rows", bounds.rows, "Selected rows (default: lemma minimum)");
  c_bounds->add_option("--cols", bounds.cols, "Selected columns (default: lemma minimum)");
  c_bounds->add_option("--input", bounds.input, "Measure r, mu1, mu2, kappa, N, T from a signal CSV")
      ->check(CLI::ExistingFile);
  c_bounds->add_flag("--json", bounds.json, "JSON output");

  ReconstructArgs rec;
  auto* c_rec = app.add_subcommand("reconstruct", "Recover a signal from a sample set");
  c_rec->add_option("--samples", rec.samples, "SampleSet JSON")->required()->check(CLI::ExistingFile);
  c_rec->add_option("--graph", rec.graph, "Edge list CSV")->check(CLI::ExistingFile);
  c_rec->add_option("--vertices", rec.vertices, "N");
  c_rec->add_option("--steps", rec.steps, "T");
  c_rec->add_option("--truth", rec.truth, "Ground-truth CSV for NRMSE")->check(CLI::ExistingFile);
  c_rec->add_option("--method", rec.method, "joint | two_stage | svt | tnnr")->capture_default_str();
  c_rec->add_option("--config", rec.config, "Solver config JSON")->check(CLI::ExistingFile);
  c_rec->add_option("--out", rec.out, "Reconstruction CSV")->required();
  c_rec->add_option("--report", rec.report, "Run report JSON");

  VerifyArgs ver;
  auto* c_verify = app.add_subcommand("verify", "Monte Carlo checks of the selection lemmas");
  c_verify->require_subcommand(1);
  auto* c_l1 = c_verify->add_subcommand("lemma1", "rank preservation of X(I,:) and X(I,J)");
  auto* c_l2 = c_verify->add_subcommand("lemma2", "incoherence of X(I,J)");
  for (auto* c : {c_l1, c_l2}) {
    c->add_option("--synthetic", ver.synthetic, "Generator (default n=200,t=300,r=3,kg=3,kt=3,graph=cycle)");
    c->add_option("--trials", ver.trials)->capture_default_str();
    c->add_option("--rows", ver.rows, "Override |I|");
    c->add_option("--cols", ver.cols, "Override |J|");
    c->add_option("--report", ver.report, "Write the JSON report here too");
  }
  c_l1->add_option("--delta", ver.delta)->capture_default_str();
  c_l1->add_option("--eps", ver.eps)->capture_default_str();
  c_l2->add_option("--eta", ver.eta)->capture_default_str();

  ExperimentArgs ex;
  auto* c_ex = app.add_subcommand("experiment", "Ratio-grid comparison of reconstruction methods");
  c_ex->add_option("--grid", ex.grid, "table2 (default ratio grid)");
  c_ex->add_option("--ratios", ex.ratios, "rc:sub,rc:sub,...");
  c_ex->add_option("--synthetic", ex.synthetic, "Generator (default n=207,t=512,r=3,kg=3,kt=3,graph=knn)");
  c_ex->add_option("--dataset", ex.dataset, "Sensor CSV")->check(CLI::ExistingFile);
  c_ex->add_option("--window", ex.window, "Window length T")->capture_default_str();
  c_ex->add_option("--sensors", ex.sensors, "Declared sensor count (orientation detection)");
  c_ex->add_option("--coords", ex.coords, "sensor_id,lat,lon sidecar")->check(CLI::ExistingFile);
  c_ex->add_option("--knn-k", ex.knn_k)->capture_default_str();
  c_ex->add_option("--methods", ex.methods, "Comma list (default joint,svt,tnnr)");
  c_ex->add_option("--trials", ex.trials, "Trials per setting (default 1)");
  c_ex->add_option("--config", ex.config, "Config JSON")->check(CLI::ExistingFile);
  c_ex->add_option("--out-dir", ex.out_dir, "Write cells.csv, trials.csv, report.json, plot_*.dat");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_synth->parsed()) return cmd_synth(synth, seed);
    if (c_sample->parsed()) return cmd_sample(sample, seed);
    if (c_bounds->parsed()) return cmd_bounds(bounds);
    if (c_rec->parsed()) return cmd_reconstruct(rec);
    if (c_l1->parsed()) return cmd_verify_lemma1(ver, seed);
    if (c_l2->parsed()) return cmd_verify_lemma2(ver, seed);
    if (c_ex->parsed()) return cmd_experiment(ex, seed);
  } catch (const Error& e) {
    std::cerr << "tvgs: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidInput ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "tvgs: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
