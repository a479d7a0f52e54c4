#include <random>

#include <gtest/gtest.h>

#include "ddtruss/heuristic.hpp"
#include "test_support.hpp"

namespace {

using namespace ddtruss;
using fixtures::Instance;

Instance bar_instance() {
  return fixtures::make_instance(fixtures::single_bar(), MaterialDataset({{0, 0}, {0.001, 2}, {0.002, 4}}), 1.0,
                                Eigen::VectorXd::Constant(1, 3.0));
}

TEST(Heuristic, SingleBarExample) {
  const Instance inst = bar_instance();
  EXPECT_EQ(zero_state_assignment(*inst.solver), Assignment{{0}});
  const HeuristicReport r = solve_heuristic(*inst.solver, inst.load);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 2u);
  EXPECT_EQ(r.assignment, Assignment{{1}});
  EXPECT_DOUBLE_EQ(r.state.objective, 0.5);
  ASSERT_EQ(r.objective_trace.size(), 2u);
  EXPECT_DOUBLE_EQ(r.objective_trace[0], 4.5);
  EXPECT_DOUBLE_EQ(r.objective_trace[1], 0.5);
}

TEST(Heuristic, CapOneTruncates) {
  const Instance inst = bar_instance();
  HeuristicOptions opt;
  opt.max_iterations = 1;
  const HeuristicReport r = solve_heuristic(*inst.solver, inst.load, opt);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1u);
  // Reported state belongs to the reported assignment.
  EXPECT_EQ(r.state.objective, inst.solver->solve(r.assignment, inst.load).objective);
}

TEST(Heuristic, DefaultCap) {
  EXPECT_EQ(HeuristicOptions{}.max_iterations, 10000u);
}

TEST(Heuristic, ExactLinearDataConvergesToZero) {
  const TrussModel ten = builtin_ten_bar();
  const double modulus = 1.8e9;
  const Eigen::VectorXd p = load_vector(ten, 3.0);
  const Eigen::VectorXd eps = fixtures::linear_fem_strains(ten, fixtures::linear_fem_displacements(ten, modulus, p));
  std::vector<MaterialPoint> pts = {{0.0, 0.0}};
  for (double e : eps) pts.push_back({e, modulus * e});
  const MaterialDataset data(pts);
  const StateSolver solver(ten, data, modulus);
  const HeuristicReport r = solve_heuristic(solver, p);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.state.objective, 1e-9);
}

TEST(Heuristic, TraceMonotoneAndFixedPoint) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 40; ++k) {
    const Instance inst = fixtures::random_instance(rng, 2, 8);
    const HeuristicReport r = solve_heuristic(*inst.solver, inst.load);
    ASSERT_FALSE(r.objective_trace.empty());
    for (std::size_t t = 1; t < r.objective_trace.size(); ++t) {
      EXPECT_LE(r.objective_trace[t], r.objective_trace[t - 1] + 1e-12);
    }
    EXPECT_LE(r.iterations, HeuristicOptions{}.max_iterations);
    if (r.converged) {
      EXPECT_EQ(nearest_assignment(*inst.solver, r.state), r.assignment);
      HeuristicOptions again;
      again.initial = r.assignment;
      const HeuristicReport r2 = solve_heuristic(*inst.solver, inst.load, again);
      EXPECT_EQ(r2.iterations, 1u);
      EXPECT_EQ(r2.assignment, r.assignment);
    }
  }
}

TEST(Heuristic, CycleDetectionStopsEarly) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 40; ++k) {
    const Instance inst = fixtures::random_instance(rng, 2, 8);
    HeuristicOptions opt;
    opt.detect_cycles = true;
    const HeuristicReport r = solve_heuristic(*inst.solver, inst.load, opt);
    const HeuristicReport plain = solve_heuristic(*inst.solver, inst.load);
    if (plain.converged) {
      EXPECT_TRUE(r.converged);
      EXPECT_EQ(r.assignment, plain.assignment);
    } else {
      EXPECT_TRUE(r.cycle_detected);
      EXPECT_LT(r.iterations, plain.iterations);
    }
  }
}

}  // namespace
