#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ddtruss/heuristic.hpp"
#include "ddtruss/solve_report.hpp"
#include "ddtruss/state_solver.hpp"

namespace ddtruss {

/// Branch-and-bound state over member-to-data assignments. A member is either
/// fixed to one data point or free; free members may take any data point,
/// since branching fixes a member outright (one child per data point).
class PartialAssignment {
 public:
  static constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();

  explicit PartialAssignment(std::size_t members) : fixed_(members, kFree) {}

  std::size_t size() const { return fixed_.size(); }
  bool is_free(std::size_t member) const { return fixed_[member] == kFree; }
  std::size_t fixed_index(std::size_t member) const { return fixed_[member]; }
  void fix(std::size_t member, std::size_t data_index) { fixed_[member] = data_index; }
  std::size_t num_free() const;
  bool complete() const { return num_free() == 0; }
  /// Requires complete().
  Assignment to_assignment() const;

  friend bool operator==(const PartialAssignment&, const PartialAssignment&) = default;

 private:
  std::vector<std::size_t> fixed_;
};

struct BnBNode {
  PartialAssignment partial;
  double lower_bound = 0.0;
  std::size_t depth = 0;
};

/// How node lower bounds are computed.
///
/// kDropFree: free members' data terms are dropped; the remaining
/// equality-constrained QP over (u, σ) is solved exactly.
///
/// kConvexHull: free members' targets range over the convex hull of the data
/// (the continuous relaxation of the selection variables). Solved
/// approximately by alternating projections; the reported bound is the
/// Lagrangian dual value at the iterate, which is a valid lower bound at
/// every iteration regardless of convergence.
enum class BoundStrategy { kDropFree, kConvexHull };

std::string_view to_string(BoundStrategy strategy);
/// "drop-free" or "hull"; throws kInvalidArgument.
BoundStrategy parse_bound_strategy(std::string_view text);

struct BoundOptions {
  std::size_t max_iterations = 200;
  /// Stop once (relaxation primal − dual) ≤ rel_tolerance · primal.
  double rel_tolerance = 1e-6;
};

/// Relaxation solution at a node.
struct Relaxation {
  double bound = 0.0;
  Eigen::VectorXd strain;  // member states used for branching decisions
  Eigen::VectorXd stress;
  Eigen::VectorXd data_strain;  // relaxation targets, reused as a warm start
  Eigen::VectorXd data_stress;
  std::size_t iterations = 0;

  // Dual certificate (kConvexHull only). With a_i = ε_i − e_i and
  // β_i = (σ_i − s_i)/c at the iterate, member i contributes
  //   min_j −v c a²/2 − v c a (ε̌_j − ε_i) − v c β²/2 − v β (σ̌_j − σ_i)
  // over its allowed points, and the bound is the sum over members.
  bool has_dual = false;
  Eigen::VectorXd dual_strain;  // ε_i at the certifying iterate
  Eigen::VectorXd dual_stress;  // σ_i
  Eigen::VectorXd dual_a;
  Eigen::VectorXd dual_beta;
  Eigen::VectorXd member_term;
};

/// Evaluates certified node lower bounds. Holds references to the solver and load.
class NodeBounder {
 public:
  NodeBounder(const StateSolver& solver, const Eigen::VectorXd& load, BoundStrategy strategy,
              BoundOptions options = {});

  /// `cutoff`: iteration may stop as soon as the bound reaches it.
  /// `warm`: a parent's relaxation to start from.
  Relaxation evaluate(const PartialAssignment& partial, double cutoff = std::numeric_limits<double>::infinity(),
                      const Relaxation* warm = nullptr) const;

  /// Lower bound valid for the child of `parent_partial` fixing `member` to
  /// `data_index`, derived from the parent's relaxation without a solve.
  double child_bound(const Relaxation& parent, std::size_t member, std::size_t data_index) const;

  BoundStrategy strategy() const { return strategy_; }
  /// Convex hull of the data in scaled coordinates (√c ε̌, σ̌/√c), counter-clockwise.
  const std::vector<std::size_t>& hull_vertices() const { return hull_; }

 private:
  Relaxation evaluate_drop_free(const PartialAssignment& partial) const;
  Relaxation evaluate_hull(const PartialAssignment& partial, double cutoff, const Relaxation* warm) const;
  /// Projects (ε, σ) onto the data hull in the weighted metric.
  std::pair<double, double> project_to_hull(double strain, double stress) const;
  double dual_value(const PartialAssignment& partial, const MechanicalState& state, Relaxation& out) const;
  double member_dual_term(const Relaxation& rel, std::size_t member, std::size_t data_index) const;

  const StateSolver& solver_;
  const Eigen::VectorXd& load_;
  BoundStrategy strategy_;
  BoundOptions options_;
  std::vector<std::size_t> hull_;
  std::vector<std::pair<double, double>> hull_scaled_;
};

/// Certified lower bound of a node under the given strategy.
double lower_bound(const BnBNode& node, const StateSolver& solver, const Eigen::VectorXd& load,
                   BoundStrategy strategy = BoundStrategy::kDropFree);

/// Free member whose relaxation point is most ambiguous: smallest ratio of
/// second-nearest to nearest data distance, ties to the lowest index.
/// Throws kNoFreeMember.
std::size_t select_branching_member(const PartialAssignment& partial, const Relaxation& relaxation,
                                    const StateSolver& solver);

/// Data indices ordered by distance from the member's relaxation point, nearest first.
std::vector<std::size_t> ordered_candidates(std::size_t member, const Relaxation& relaxation,
                                            const StateSolver& solver);

/// One child per data point for the selected member, nearest first. Children
/// carry the parent's bound (or the dual-derived child bound when available).
std::vector<BnBNode> branch(const BnBNode& node, const Relaxation& relaxation, const StateSolver& solver,
                            const NodeBounder* bounder = nullptr);

/// Observation hook fired once per explored node, after it has been bounded.
struct NodeEvent {
  const PartialAssignment& partial;
  std::size_t depth;
  double lower_bound;
  double parent_bound;  // −∞ for the root
  bool is_leaf;
  double incumbent;     // after processing this node
  double pool_min_bound;  // +∞ if the pool is empty
  bool pruned;
};

struct ExactOptions {
  double gap_tol = 0.0;
  std::optional<double> time_limit_s;
  std::size_t node_limit = 10'000'000;
  BoundStrategy bound = BoundStrategy::kConvexHull;
  BoundOptions bound_options;
  /// Seed the incumbent with the fixed-point heuristic.
  bool heuristic_incumbent = true;
  HeuristicOptions heuristic;
  /// Round each relaxation to nearest data points and try it as an incumbent.
  bool rounding = true;
  /// Disable to enumerate the whole tree (for testing prune safety); gap_tol is then ignored.
  bool pruning = true;
  std::function<void(const NodeEvent&)> observer;
};

/// Nodes whose bound is within this of the incumbent are pruned.
inline constexpr double kPruneTolerance = 1e-12;

/// Best-first branch-and-bound: pops the minimum bound (ties: deeper, then
/// FIFO). Terminates Optimal when no node can improve the incumbent,
/// GapReached when incumbent − best bound ≤ gap_tol·max(1, |incumbent|).
ExactReport solve_exact(const StateSolver& solver, const Eigen::VectorXd& load, const ExactOptions& options = {});

}  // namespace ddtruss
