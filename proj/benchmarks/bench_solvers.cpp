// Kernel and solver timings on the builtin ten-bar truss with synthetic data.

#include <benchmark/benchmark.h>

#include "ddtruss/heuristic.hpp"
#include "ddtruss/miqp.hpp"
#include "ddtruss/state_solver.hpp"

namespace {

using namespace ddtruss;

struct Setup {
  explicit Setup(std::size_t d) : model(builtin_ten_bar()), data(make_data(d)), solver(model, data, compute_c(data).c) {}

  static MaterialDataset make_data(std::size_t d) {
    SyntheticOptions opt;
    opt.count = d;
    return generate_synthetic(opt);
  }

  TrussModel model;
  MaterialDataset data;
  StateSolver solver;
};

void BM_FixedAssignmentSolve(benchmark::State& state) {
  const Setup s(300);
  const Eigen::VectorXd p = load_vector(s.model, 10.0);
  const Assignment a = zero_state_assignment(s.solver);
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.solver.solve(a, p));
  }
}
BENCHMARK(BM_FixedAssignmentSolve);

void BM_NearestPoint(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  double e = -0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nearest_point(e, 1.5e7, s.solver.c(), 3.6e-3, s.data));
    e = e > 0.01 ? -0.01 : e + 1e-5;
  }
}
BENCHMARK(BM_NearestPoint)->Arg(30)->Arg(300);

void BM_Heuristic(benchmark::State& state) {
  const Setup s(300);
  const Eigen::VectorXd p = load_vector(s.model, static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_heuristic(s.solver, p));
  }
}
BENCHMARK(BM_Heuristic)->Arg(2)->Arg(10);

void BM_NodeBound(benchmark::State& state) {
  const Setup s(30);
  const Eigen::VectorXd p = load_vector(s.model, 10.0);
  const NodeBounder bounder(s.solver, p, static_cast<BoundStrategy>(state.range(0)));
  PartialAssignment partial(s.model.num_members());
  partial.fix(0, 3);
  partial.fix(4, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bounder.evaluate(partial));
  }
  state.SetLabel(std::string(to_string(bounder.strategy())));
}
BENCHMARK(BM_NodeBound)->Arg(static_cast<int>(BoundStrategy::kDropFree))->Arg(static_cast<int>(BoundStrategy::kConvexHull));

void BM_Exact(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  const Eigen::VectorXd p = load_vector(s.model, 6.0);
  std::size_t nodes = 0;
  for (auto _ : state) {
    const ExactReport r = solve_exact(s.solver, p);
    nodes = r.nodes_explored;
    benchmark::DoNotOptimize(r.objective);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_Exact)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
