#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "ddtruss/error.hpp"
#include "ddtruss/heuristic.hpp"
#include "ddtruss/miqp.hpp"
#include "ddtruss/oracle.hpp"
#include "test_support.hpp"

namespace {

using namespace ddtruss;
using fixtures::Instance;

constexpr BoundStrategy kStrategies[] = {BoundStrategy::kDropFree, BoundStrategy::kConvexHull};

Instance bar_instance() {
  return fixtures::make_instance(fixtures::single_bar(), MaterialDataset({{0, 0}, {0.001, 2}, {0.002, 4}}), 1.0,
                                Eigen::VectorXd::Constant(1, 3.0));
}

std::vector<Instance> random_instances(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  for (int k = 0; k < count; ++k) out.push_back(fixtures::random_instance(rng));
  return out;
}

std::vector<std::size_t> fixed_vector(const PartialAssignment& p) {
  std::vector<std::size_t> v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[i] = p.fixed_index(i);
  return v;
}

TEST(Miqp, SingleBarExample) {
  const Instance inst = bar_instance();
  for (BoundStrategy b : kStrategies) {
    ExactOptions opt;
    opt.bound = b;
    const ExactReport r = solve_exact(*inst.solver, inst.load, opt);
    EXPECT_DOUBLE_EQ(r.objective, 0.5);
    EXPECT_EQ(r.assignment, Assignment{{1}});
    EXPECT_EQ(r.status, SolveStatus::kOptimal);
    EXPECT_EQ(r.gap, 0.0);
  }
}

TEST(Miqp, BoundStrategyNames) {
  EXPECT_EQ(parse_bound_strategy("hull"), BoundStrategy::kConvexHull);
  EXPECT_EQ(parse_bound_strategy("drop-free"), BoundStrategy::kDropFree);
  EXPECT_EQ(to_string(BoundStrategy::kDropFree), "drop-free");
  EXPECT_THROW(parse_bound_strategy("box"), Error);
}

TEST(Miqp, RootAndLeafBounds) {
  for (const Instance& inst : random_instances(21, 20)) {
    const std::size_t m = inst.model->num_members();
    const BnBNode root{PartialAssignment(m), 0.0, 0};
    EXPECT_NEAR(lower_bound(root, *inst.solver, inst.load), 0.0, 1e-12);

    BnBNode leaf{PartialAssignment(m), 0.0, m};
    for (std::size_t i = 0; i < m; ++i) leaf.partial.fix(i, i % inst.data->size());
    const double obj = inst.solver->solve(leaf.partial.to_assignment(), inst.load).objective;
    for (BoundStrategy b : kStrategies) {
      EXPECT_LE(fixtures::rel_diff(lower_bound(leaf, *inst.solver, inst.load, b), obj), 1e-12);
    }
  }
}

// Random partial assignments: bound ≤ enumerated best completion, and fixing one
// more member never lowers the drop-free bound.
TEST(Miqp, StandaloneBoundsValid) {
  std::mt19937_64 rng(4);
  for (const Instance& inst : random_instances(22, 25)) {
    const std::size_t m = inst.model->num_members();
    const std::size_t d = inst.data->size();
    PartialAssignment p(m);
    std::uniform_int_distribution<std::size_t> pick(0, d - 1);
    double prev = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double best = fixtures::min_over_completions(*inst.solver, inst.load, fixed_vector(p));
      const BnBNode node{p, 0.0, i};
      const double drop = lower_bound(node, *inst.solver, inst.load, BoundStrategy::kDropFree);
      const double hull = lower_bound(node, *inst.solver, inst.load, BoundStrategy::kConvexHull);
      EXPECT_LE(drop, best + 1e-9 * std::max(1.0, best));
      EXPECT_LE(hull, best + 1e-9 * std::max(1.0, best));
      EXPECT_GE(drop, prev - 1e-9 * std::max(1.0, prev));
      prev = drop;
      p.fix(i, pick(rng));
    }
  }
}

TEST(Miqp, BranchPartitionsAndOrdersNearestFirst) {
  const Instance inst = bar_instance();
  const NodeBounder bounder(*inst.solver, inst.load, BoundStrategy::kDropFree);
  const BnBNode root{PartialAssignment(1), 0.0, 0};
  const Relaxation rel = bounder.evaluate(root.partial);
  const std::vector<BnBNode> kids = branch(root, rel, *inst.solver);
  ASSERT_EQ(kids.size(), 3u);
  std::vector<std::size_t> seen;
  for (const BnBNode& k : kids) {
    EXPECT_TRUE(k.partial.complete());
    EXPECT_EQ(k.depth, 1u);
    seen.push_back(k.partial.fixed_index(0));
  }
  std::vector<std::size_t> sorted = seen;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2}));
  const NearestPoint np = nearest_point(rel.strain[0], rel.stress[0], inst.c, 1.0, *inst.data);
  EXPECT_EQ(seen.front(), np.index);
  for (std::size_t k = 1; k < seen.size(); ++k) {
    EXPECT_LE(weighted_distance_sq(rel.strain[0], rel.stress[0], (*inst.data)[seen[k - 1]], inst.c, 1.0),
              weighted_distance_sq(rel.strain[0], rel.stress[0], (*inst.data)[seen[k]], inst.c, 1.0));
  }

  BnBNode full = kids.front();
  EXPECT_THROW(branch(full, rel, *inst.solver), Error);
}

TEST(Miqp, BranchOnRandomInstances) {
  for (const Instance& inst : random_instances(23, 10)) {
    const std::size_t m = inst.model->num_members();
    const NodeBounder bounder(*inst.solver, inst.load, BoundStrategy::kConvexHull);
    BnBNode node{PartialAssignment(m), 0.0, 0};
    node.partial.fix(0, 0);
    const Relaxation rel = bounder.evaluate(node.partial);
    node.lower_bound = rel.bound;
    const std::vector<BnBNode> kids = branch(node, rel, *inst.solver, &bounder);
    ASSERT_EQ(kids.size(), inst.data->size());
    if (m == 1) continue;
    // Exactly one newly fixed member, the same for every child, each data index once.
    std::size_t member = m;
    std::vector<bool> used(inst.data->size(), false);
    for (const BnBNode& k : kids) {
      EXPECT_GE(k.lower_bound, node.lower_bound - 1e-9);
      EXPECT_EQ(k.partial.num_free(), m - 2);
      for (std::size_t i = 1; i < m; ++i) {
        if (!k.partial.is_free(i)) {
          if (member == m) member = i;
          EXPECT_EQ(i, member);
          EXPECT_FALSE(used[k.partial.fixed_index(i)]);
          used[k.partial.fixed_index(i)] = true;
        }
      }
      const double best = fixtures::min_over_completions(*inst.solver, inst.load, fixed_vector(k.partial));
      EXPECT_LE(k.lower_bound, best + 1e-9 * std::max(1.0, best));
    }
  }
}

TEST(Miqp, MatchesOracle) {
  int checked = 0;
  for (const Instance& inst : random_instances(31, 30)) {
    const ExactReport oracle = brute_force(*inst.solver, inst.load);
    for (BoundStrategy b : kStrategies) {
      ExactOptions opt;
      opt.bound = b;
      const ExactReport r = solve_exact(*inst.solver, inst.load, opt);
      EXPECT_EQ(r.status, SolveStatus::kOptimal);
      EXPECT_LE(fixtures::rel_diff(r.objective, oracle.objective), 1e-9)
          << to_string(b) << " exact " << r.objective << " oracle " << oracle.objective;
      EXPECT_LE(fixtures::rel_diff(r.state.objective, r.objective), 1e-15);
    }
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(Miqp, NoHeuristicNoRoundingStillExact) {
  for (const Instance& inst : random_instances(32, 10)) {
    ExactOptions opt;
    opt.heuristic_incumbent = false;
    opt.rounding = false;
    const ExactReport r = solve_exact(*inst.solver, inst.load, opt);
    EXPECT_LE(fixtures::rel_diff(r.objective, brute_force(*inst.solver, inst.load).objective), 1e-9);
  }
}

TEST(Miqp, PruneSafety) {
  for (const Instance& inst : random_instances(33, 20)) {
    for (BoundStrategy b : kStrategies) {
      ExactOptions opt;
      opt.bound = b;
      const ExactReport pruned = solve_exact(*inst.solver, inst.load, opt);
      opt.pruning = false;
      const ExactReport full = solve_exact(*inst.solver, inst.load, opt);
      EXPECT_LE(fixtures::rel_diff(pruned.objective, full.objective), 1e-12);
      EXPECT_EQ(full.status, SolveStatus::kOptimal);
      EXPECT_GE(full.nodes_explored, pruned.nodes_explored);
    }
  }
}

TEST(Miqp, Deterministic) {
  SyntheticOptions gen;
  gen.count = 12;
  MaterialDataset data = generate_synthetic(gen);
  const double c = compute_c(data).c;
  TrussModel ten = builtin_ten_bar();
  Eigen::VectorXd p = load_vector(ten, 6.0);
  const Instance inst = fixtures::make_instance(std::move(ten), std::move(data), c, std::move(p));
  const ExactReport a = solve_exact(*inst.solver, inst.load);
  const ExactReport b = solve_exact(*inst.solver, inst.load);
  EXPECT_EQ(a.nodes_explored, b.nodes_explored);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.assignment, b.assignment);
}

// Every processed node: bound ≤ best completion, child ≥ parent, soundness of
// the (incumbent, pool) pair against the true optimum.
TEST(Miqp, ObservedBoundsValidAndMonotone) {
  for (const Instance& inst : random_instances(34, 20)) {
    const double opt_value = brute_force(*inst.solver, inst.load).objective;
    for (BoundStrategy b : kStrategies) {
      ExactOptions opt;
      opt.bound = b;
      opt.observer = [&](const NodeEvent& ev) {
        const double best = fixtures::min_over_completions(*inst.solver, inst.load, fixed_vector(ev.partial));
        EXPECT_LE(ev.lower_bound, best + 1e-9 * std::max(1.0, best));
        EXPECT_GE(ev.lower_bound, ev.parent_bound - 1e-9);
        EXPECT_GE(ev.incumbent, opt_value - 1e-9 * std::max(1.0, opt_value));
        EXPECT_LE(std::min(ev.incumbent, ev.pool_min_bound), opt_value + 1e-9 * std::max(1.0, opt_value));
      };
      solve_exact(*inst.solver, inst.load, opt);
    }
  }
}

TEST(Miqp, LinearDataOptimumIsZero) {
  const TrussModel ten = builtin_ten_bar();
  const double modulus = 2e9;
  const Eigen::VectorXd p = load_vector(ten, 4.0);
  const Eigen::VectorXd eps = fixtures::linear_fem_strains(ten, fixtures::linear_fem_displacements(ten, modulus, p));
  std::vector<MaterialPoint> pts;
  for (double e : eps) pts.push_back({e, modulus * e});
  for (int k = 0; k < 5; ++k) pts.push_back({1e-3 * k, 1.5e6 * k});
  const MaterialDataset data(pts);
  const StateSolver solver(ten, data, modulus);
  const ExactReport r = solve_exact(solver, p);
  EXPECT_LE(r.objective, 1e-9);
}

TEST(Miqp, LimitsReportIncumbentAndGap) {
  SyntheticOptions gen;
  gen.count = 30;
  MaterialDataset data = generate_synthetic(gen);
  const double c = compute_c(data).c;
  TrussModel ten = builtin_ten_bar();
  Eigen::VectorXd p = load_vector(ten, 10.0);
  const Instance inst = fixtures::make_instance(std::move(ten), std::move(data), c, std::move(p));
  ExactOptions opt;
  opt.node_limit = 5;
  const ExactReport r = solve_exact(*inst.solver, inst.load, opt);
  EXPECT_EQ(r.status, SolveStatus::kNodeLimit);
  EXPECT_EQ(r.nodes_explored, 5u);
  EXPECT_TRUE(std::isfinite(r.objective));
  EXPECT_LE(r.best_bound, r.objective);
  EXPECT_GT(r.gap, 0.0);
  EXPECT_LE(fixtures::rel_diff(r.objective, inst.solver->solve(r.assignment, inst.load).objective), 1e-12);

  opt.node_limit = 10'000'000;
  opt.gap_tol = 0.5;
  const ExactReport loose = solve_exact(*inst.solver, inst.load, opt);
  EXPECT_TRUE(loose.status == SolveStatus::kGapReached || loose.status == SolveStatus::kOptimal);
  EXPECT_LE(loose.objective - loose.best_bound, 0.5 * std::max(1.0, loose.objective) + 1e-12);

  opt.gap_tol = 0.0;
  opt.time_limit_s = 0.0;
  EXPECT_EQ(solve_exact(*inst.solver, inst.load, opt).status, SolveStatus::kTimeLimit);
}

TEST(Miqp, HeuristicDominance) {
  for (const Instance& inst : random_instances(35, 25)) {
    const double exact = solve_exact(*inst.solver, inst.load).objective;
    const HeuristicReport h = solve_heuristic(*inst.solver, inst.load);
    EXPECT_GE(h.state.objective, exact - 1e-9);
  }
}

}  // namespace
