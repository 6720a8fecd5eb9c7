#include "tvgs/evaluation.hpp"
#include "tvgs/graph_core.hpp"
#include "tvgs/reconstruction.hpp"
#include "tvgs/sampling.hpp"
#include "tvgs/signal_model.hpp"

#include <benchmark/benchmark.h>

using namespace tvgs;

namespace {

struct Problem {
  GraphOperators ops;
  TimeOperators tops;
  Eigen::MatrixXd x;
  SampleSet s;
};

Problem make_problem(Index n, Index t, double rc, double sub) {
  Problem p{build_operators(random_geometric_graph(n, 5, 7)),
            build_time_operators(TimeHorizon{t}), {}, {}};
  p.x = synth_signal(p.ops, p.tops, SynthSpec{3, 3, 3}, 11);
  p.s = subset_random_sample(p.x, SamplingPlan::from_ratios(rc, sub), 12);
  return p;
}

void BM_BuildOperators(benchmark::State& st) {
  const VertexGraph g = random_geometric_graph(st.range(0), 5, 7);
  for (auto _ : st) benchmark::DoNotOptimize(build_operators(g));
}
BENCHMARK(BM_BuildOperators)->Arg(60)->Arg(207)->Unit(benchmark::kMillisecond);

void BM_SingularValueShrink(benchmark::State& st) {
  const Eigen::MatrixXd m = Eigen::MatrixXd::Random(st.range(0), st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(singular_value_shrink(m, 0.5));
}
BENCHMARK(BM_SingularValueShrink)->Args({60, 80})->Args({207, 512})->Unit(benchmark::kMillisecond);

void BM_SubsetSample(benchmark::State& st) {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(207, 512);
  const SamplingPlan plan = SamplingPlan::from_ratios(0.8, 0.8);
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(subset_random_sample(x, plan, seed++));
}
BENCHMARK(BM_SubsetSample)->Unit(benchmark::kMillisecond);

void BM_TvObjectiveGradient(benchmark::State& st) {
  const Problem p = make_problem(st.range(0), st.range(1), 1.0, 1.0);
  Eigen::MatrixXd grad;
  for (auto _ : st) benchmark::DoNotOptimize(tv_objective(p.x, p.ops, 0.1, grad));
}
BENCHMARK(BM_TvObjectiveGradient)->Args({60, 80})->Args({207, 512})->Unit(benchmark::kMicrosecond);

void BM_SolveJoint(benchmark::State& st) {
  const Problem p = make_problem(60, 80, 0.8, 0.7);
  for (auto _ : st) benchmark::DoNotOptimize(solve_joint(p.s, p.ops, p.tops));
}
BENCHMARK(BM_SolveJoint)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_TwoStage(benchmark::State& st) {
  const Problem p = make_problem(60, 80, 0.8, 0.7);
  for (auto _ : st) benchmark::DoNotOptimize(two_stage_reconstruct(p.s, p.ops, p.tops));
}
BENCHMARK(BM_TwoStage)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_Svt(benchmark::State& st) {
  const Problem p = make_problem(60, 80, 0.8, 0.7);
  for (auto _ : st) benchmark::DoNotOptimize(svt_baseline(p.s, 60, 80));
}
BENCHMARK(BM_Svt)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_Tnnr(benchmark::State& st) {
  const Problem p = make_problem(60, 80, 0.8, 0.7);
  for (auto _ : st) benchmark::DoNotOptimize(tnnr_baseline(p.s, 60, 80));
}
BENCHMARK(BM_Tnnr)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
