#include "tvgs/evaluation.hpp"

#include "tvgs/error.hpp"
#include "tvgs/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <string>

namespace tvgs {

double nrmse(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::InvalidInput,
          "nrmse operands differ in shape");
  const double ref = a.norm();
  require(ref > 0.0, ErrorKind::UndefinedMetric, "nrmse against an all-zero reference");
  return (a - b).norm() / ref;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return splitmix(splitmix(splitmix(base) ^ a) ^ b);
}

VertexGraph random_geometric_graph(Index num_vertices, Index k, std::uint64_t seed) {
  require(num_vertices >= 2, ErrorKind::InvalidInput, "need at least two vertices");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd pts(num_vertices, 2);
  for (Index i = 0; i < num_vertices; ++i) {
    pts(i, 0) = unit(rng);
    pts(i, 1) = unit(rng);
  }
  return knn_gaussian_graph(pts, k);
}

// --- lemma checks -------------------------------------------------------------

namespace {

Eigen::MatrixXd select(const Eigen::MatrixXd& x, const std::vector<Index>& rows,
                       const std::vector<Index>& cols) {
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      out(static_cast<Index>(a), static_cast<Index>(b)) = x(rows[a], cols[b]);
  return out;
}

std::vector<Index> all_indices(Index n) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

double binomial_allowance(double q, Index trials) {
  return 3.0 * std::sqrt(std::max(q * (1.0 - q), 0.0) / static_cast<double>(trials));
}

}  // namespace

Lemma1Report verify_lemma1(const GeneratorSpec& gen, const Lemma1Options& opt) {
  require(opt.trials >= 1, ErrorKind::InvalidInput, "trials must be >= 1");
  const GraphOperators ops = build_operators(gen.graph);
  const TimeOperators tops = build_time_operators(TimeHorizon{gen.num_steps});
  const Index n = ops.num_vertices();
  const Index t = tops.num_steps();

  Lemma1Report rep;
  rep.trials = opt.trials;
  rep.rows_min = n;
  rep.cols_min = t;
  for (Index k = 0; k < opt.trials; ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    const Eigen::MatrixXd x = synth_signal(ops, tops, gen.synth, mix_seed(opt.seed, uk, 0));
    const IncoherenceProfile prof = incoherence(x);
    require(prof.rank >= 1, ErrorKind::InvalidInput, "degenerate generator");
    rep.rank = prof.rank;
    rep.mu1_max = std::max(rep.mu1_max, prof.mu1);
    rep.mu2_max = std::max(rep.mu2_max, prof.mu2);

    Index rows = opt.rows > 0 ? opt.rows : lemma1_min_rows(prof.rank, prof.mu1, opt.delta, opt.epsilon);
    Index cols = opt.cols > 0 ? opt.cols : lemma1_min_cols(prof.rank, prof.mu2, opt.delta, opt.epsilon);
    if (rows > n || cols > t) ++rep.clamped_trials;
    rows = std::min(rows, n);
    cols = std::min(cols, t);
    rep.rows_min = std::min(rep.rows_min, rows);
    rep.rows_max = std::max(rep.rows_max, rows);
    rep.cols_min = std::min(rep.cols_min, cols);
    rep.cols_max = std::max(rep.cols_max, cols);

    const SampleSet s =
        subset_random_sample(x, SamplingPlan::from_counts(rows, cols, 1), mix_seed(opt.seed, uk, 1));
    const Index rank_r = numerical_rank(select(x, s.rows, all_indices(t)));
    const Index rank_rc = numerical_rank(select(x, s.rows, s.cols));
    if (rank_r == prof.rank) ++rep.rank_r_success;
    if (rank_rc == prof.rank) ++rep.rank_rc_success;
  }
  const auto tr = static_cast<double>(opt.trials);
  rep.fraction_r = static_cast<double>(rep.rank_r_success) / tr;
  rep.fraction_rc = static_cast<double>(rep.rank_rc_success) / tr;
  rep.floor_r = 1.0 - opt.delta;
  rep.floor_rc = rep.floor_r * rep.floor_r;
  rep.allowance_r = binomial_allowance(rep.floor_r, opt.trials);
  rep.allowance_rc = binomial_allowance(rep.floor_rc, opt.trials);
  return rep;
}

SvdFactors structured_submatrix_svd(const SvdFactors& full, const std::vector<Index>& rows,
                                    const std::vector<Index>& cols) {
  const Index r = full.rank;
  Eigen::MatrixXd u_i(static_cast<Index>(rows.size()), r);
  for (std::size_t a = 0; a < rows.size(); ++a) u_i.row(static_cast<Index>(a)) = full.u.row(rows[a]);
  // U(I,:) Sigma = U_R Sigma_R W^T.
  Eigen::JacobiSVD<Eigen::MatrixXd> s1(u_i * full.sigma.asDiagonal(),
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd u_r = s1.matrixU();
  const Eigen::MatrixXd v_r = full.v * s1.matrixV();
  Eigen::MatrixXd v_rj(static_cast<Index>(cols.size()), v_r.cols());
  for (std::size_t b = 0; b < cols.size(); ++b) v_rj.row(static_cast<Index>(b)) = v_r.row(cols[b]);
  // Sigma_R V_R(J,:)^T = U~ Sigma_RC V_RC^T.
  Eigen::JacobiSVD<Eigen::MatrixXd> s2(s1.singularValues().asDiagonal() * v_rj.transpose(),
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors f;
  f.u = u_r * s2.matrixU();
  f.sigma = s2.singularValues();
  f.v = s2.matrixV();
  f.rank = f.sigma.size();
  return f;
}

Lemma2Report verify_lemma2(const GeneratorSpec& gen, const Lemma2Options& opt) {
  require(opt.trials >= 1, ErrorKind::InvalidInput, "trials must be >= 1");
  require(opt.eta >= 0.0 && opt.eta < 1.0, ErrorKind::InvalidInput, "eta must lie in [0, 1)");
  const GraphOperators ops = build_operators(gen.graph);
  const TimeOperators tops = build_time_operators(TimeHorizon{gen.num_steps});
  const Index n = ops.num_vertices();
  const Index t = tops.num_steps();
  const Index rows = opt.rows > 0 ? opt.rows : round_half_away(0.5 * static_cast<double>(n));
  const Index cols = opt.cols > 0 ? opt.cols : round_half_away(0.5 * static_cast<double>(t));
  require(rows >= 1 && rows <= n && cols >= 1 && cols <= t, ErrorKind::InvalidInput,
          "selected rows/cols outside the signal dimensions");

  Lemma2Report rep;
  rep.trials = opt.trials;
  rep.rows = rows;
  rep.cols = cols;
  for (Index k = 0; k < opt.trials; ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    Lemma2Trial tr;
    tr.seed = mix_seed(opt.seed, uk, 0);
    const Eigen::MatrixXd x = synth_signal(ops, tops, gen.synth, tr.seed);
    const SvdFactors f = thin_svd(x);
    const IncoherenceProfile prof = incoherence(x);
    rep.rank = f.rank;
    const SampleSet s =
        subset_random_sample(x, SamplingPlan::from_counts(rows, cols, 1), mix_seed(opt.seed, uk, 1));
    const Eigen::MatrixXd x_rc = select(x, s.rows, s.cols);
    tr.full_rank = numerical_rank(x_rc) == f.rank;
    const auto r = static_cast<double>(f.rank);
    const auto ni = static_cast<double>(rows);
    const auto nj = static_cast<double>(cols);
    tr.u_bound = prof.kappa * std::sqrt(prof.mu1 * r / ((1.0 - opt.eta) * ni));
    tr.v_bound = prof.kappa / (1.0 - opt.eta) *
                 std::sqrt(prof.mu2 * static_cast<double>(n) * r / (ni * nj));
    if (tr.full_rank) {
      const SvdFactors sub = structured_submatrix_svd(f, s.rows, s.cols);
      tr.u_norm = two_inf_norm(sub.u);
      tr.v_norm = two_inf_norm(sub.v);
      const SvdFactors direct = thin_svd(x_rc);
      if (direct.rank == sub.rank) {
        const Eigen::VectorXd du = direct.u.rowwise().norm() - sub.u.rowwise().norm();
        const Eigen::VectorXd dv = direct.v.rowwise().norm() - sub.v.rowwise().norm();
        tr.factor_gap = std::max(du.cwiseAbs().maxCoeff(), dv.cwiseAbs().maxCoeff());
      } else {
        tr.factor_gap = std::numeric_limits<double>::infinity();
      }
      tr.u_holds = tr.u_norm <= tr.u_bound;
      tr.v_holds = tr.v_norm <= tr.v_bound;
      ++rep.full_rank_trials;
      if (tr.u_holds) ++rep.u_satisfied;
      if (tr.v_holds) ++rep.v_satisfied;
      if (tr.u_holds && tr.v_holds) ++rep.both_satisfied;
    } else {
      ++rep.rank_deficient_trials;
    }
    rep.per_trial.push_back(tr);
  }
  rep.fraction_both = rep.full_rank_trials > 0 ? static_cast<double>(rep.both_satisfied) /
                                                     static_cast<double>(rep.full_rank_trials)
                                               : 0.0;
  rep.failure = incoherence_failure_p(rep.rank, opt.eta);
  rep.floor = std::max(0.0, (1.0 - rep.failure.p) * (1.0 - rep.failure.p));
  if (rep.failure.vacuous) rep.floor = 0.0;
  return rep;
}

// --- experiment grid --------------------------------------------------------------

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::Joint: return "joint";
    case Method::TwoStage: return "two_stage";
    case Method::Svt: return "svt";
    case Method::Tnnr: return "tnnr";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  if (name == "joint" || name == "ours") return Method::Joint;
  if (name == "two_stage" || name == "two-stage") return Method::TwoStage;
  if (name == "svt") return Method::Svt;
  if (name == "tnnr") return Method::Tnnr;
  fail(ErrorKind::InvalidInput, "unknown method '" + std::string(name) + "'");
}

std::vector<RatioSetting> table2_ratios() { return {{0.9, 0.9}, {0.8, 0.8}, {0.6, 0.6}}; }

const CellSummary& ExperimentTable::cell(Index setting, Method m) const {
  for (const CellSummary& c : cells)
    if (c.setting == setting && c.method == m) return c;
  fail(ErrorKind::OutOfRange, "no cell for setting " + std::to_string(setting) + " / " + to_string(m));
}

double median(std::vector<double> v) {
  require(!v.empty(), ErrorKind::InvalidInput, "median of an empty list");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

ExperimentTable run_experiment_grid(const ExperimentConfig& cfg, const SignalSource& source) {
  require(!cfg.ratios.empty() && !cfg.methods.empty(), ErrorKind::InvalidInput,
          "experiment needs at least one ratio setting and one method");
  require(cfg.num_trials >= 1, ErrorKind::InvalidInput, "experiment needs at least one trial");
  for (const RatioSetting& r : cfg.ratios)
    require(r.rho_rc > 0.0 && r.rho_rc <= 1.0 && r.rho_sub > 0.0 && r.rho_sub <= 1.0,
            ErrorKind::InvalidInput, "ratios must lie in (0, 1]");
  const GraphOperators ops = build_operators(source.graph);
  const TimeOperators tops = build_time_operators(TimeHorizon{source.num_steps});
  const Index n = ops.num_vertices();
  const Index t = tops.num_steps();
  for (const Eigen::MatrixXd& w : source.windows)
    require(w.rows() == n && w.cols() == t, ErrorKind::InvalidInput,
            "dataset window shape differs from the graph/horizon");

  ExperimentTable table;
  table.num_vertices = n;
  table.num_steps = t;
  std::vector<Eigen::MatrixXd> signals;
  signals.reserve(static_cast<std::size_t>(cfg.num_trials));
  for (Index k = 0; k < cfg.num_trials; ++k) {
    if (!source.windows.empty())
      signals.push_back(source.windows[static_cast<std::size_t>(k) % source.windows.size()]);
    else
      signals.push_back(synth_signal(ops, tops, source.synth,
                                     mix_seed(cfg.base_seed, static_cast<std::uint64_t>(k))));
  }

  using Clock = std::chrono::steady_clock;
  for (std::size_t si = 0; si < cfg.ratios.size(); ++si) {
    const RatioSetting rs = cfg.ratios[si];
    const SamplingPlan plan = SamplingPlan::from_ratios(rs.rho_rc, rs.rho_sub);
    for (Index k = 0; k < cfg.num_trials; ++k) {
      const Eigen::MatrixXd& x = signals[static_cast<std::size_t>(k)];
      const std::uint64_t seed =
          mix_seed(cfg.base_seed, 1000003ULL + si, static_cast<std::uint64_t>(k));
      const SampleSet s = subset_random_sample(x, plan, seed);
      for (Method m : cfg.methods) {
        const auto start = Clock::now();
        ReconstructionResult res;
        switch (m) {
          case Method::Joint: res = solve_joint(s, ops, tops, cfg.joint); break;
          case Method::TwoStage: res = two_stage_reconstruct(s, ops, tops, cfg.two_stage); break;
          case Method::Svt: res = svt_baseline(s, n, t, cfg.svt); break;
          case Method::Tnnr: res = tnnr_baseline(s, n, t, cfg.tnnr); break;
        }
        TrialOutcome o;
        o.method = m;
        o.setting = static_cast<Index>(si);
        o.ratios = rs;
        o.trial = k;
        o.seed = seed;
        o.nrmse = nrmse(x, res.x_hat);
        o.runtime_s = std::chrono::duration<double>(Clock::now() - start).count();
        o.converged = res.converged;
        o.distinct_samples = s.distinct_count();
        table.outcomes.push_back(o);
      }
    }
    for (Method m : cfg.methods) {
      CellSummary c;
      c.setting = static_cast<Index>(si);
      c.ratios = rs;
      c.rho_total = total_ratio(plan, n, t);
      c.method = m;
      std::vector<double> errs;
      for (const TrialOutcome& o : table.outcomes)
        if (o.setting == c.setting && o.method == m) {
          errs.push_back(o.nrmse);
          if (o.converged) ++c.converged;
        }
      c.trials = static_cast<Index>(errs.size());
      double sum = 0.0;
      for (double e : errs) sum += e;
      c.mean_nrmse = sum / static_cast<double>(errs.size());
      c.median_nrmse = median(errs);
      table.cells.push_back(c);
    }
  }
  return table;
}

namespace {

std::string percent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * ratio);
  return buf;
}

}  // namespace

std::string cells_csv(const ExperimentTable& t) {
  std::ostringstream out;
  out << "rho_rc,rho_sub,rho_total_pct,method,trials,converged,mean_nrmse,median_nrmse\n";
  for (const CellSummary& c : t.cells)
    out << format_double(c.ratios.rho_rc) << ',' << format_double(c.ratios.rho_sub) << ','
        << percent(c.rho_total) << ',' << to_string(c.method) << ',' << c.trials << ','
        << c.converged << ',' << format_double(c.mean_nrmse) << ','
        << format_double(c.median_nrmse) << '\n';
  return out.str();
}

std::string outcomes_csv(const ExperimentTable& t) {
  std::ostringstream out;
  out << "setting,rho_rc,rho_sub,trial,seed,method,nrmse,runtime_s,converged,distinct_samples\n";
  for (const TrialOutcome& o : t.outcomes)
    out << o.setting << ',' << format_double(o.ratios.rho_rc) << ','
        << format_double(o.ratios.rho_sub) << ',' << o.trial << ',' << o.seed << ','
        << to_string(o.method) << ',' << format_double(o.nrmse) << ','
        << format_double(o.runtime_s) << ',' << (o.converged ? 1 : 0) << ','
        << o.distinct_samples << '\n';
  return out.str();
}

std::string experiment_json(const ExperimentTable& t) {
  nlohmann::ordered_json j;
  j["num_vertices"] = t.num_vertices;
  j["num_steps"] = t.num_steps;
  auto& cells = j["cells"] = nlohmann::ordered_json::array();
  for (const CellSummary& c : t.cells)
    cells.push_back({{"rho_rc", c.ratios.rho_rc},
                     {"rho_sub", c.ratios.rho_sub},
                     {"rho_total", c.rho_total},
                     {"rho_total_pct", percent(c.rho_total)},
                     {"method", to_string(c.method)},
                     {"trials", c.trials},
                     {"converged", c.converged},
                     {"mean_nrmse", c.mean_nrmse},
                     {"median_nrmse", c.median_nrmse}});
  auto& trials = j["trials"] = nlohmann::ordered_json::array();
  for (const TrialOutcome& o : t.outcomes)
    trials.push_back({{"setting", o.setting},
                      {"trial", o.trial},
                      {"seed", o.seed},
                      {"method", to_string(o.method)},
                      {"nrmse", o.nrmse},
                      {"runtime_s", o.runtime_s},
                      {"converged", o.converged},
                      {"distinct_samples", o.distinct_samples}});
  return j.dump(2) + "\n";
}

std::string plot_data(const ExperimentTable& t, Method m) {
  std::vector<const CellSummary*> cs;
  for (const CellSummary& c : t.cells)
    if (c.method == m) cs.push_back(&c);
  std::stable_sort(cs.begin(), cs.end(),
                   [](const CellSummary* a, const CellSummary* b) { return a->rho_total < b->rho_total; });
  std::ostringstream out;
  out << "# rho_total median_nrmse (" << to_string(m) << ")\n";
  for (const CellSummary* c : cs) out << format_double(c->rho_total) << ' ' << format_double(c->median_nrmse) << '\n';
  return out.str();
}

}  // namespace tvgs
