#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ddtruss/state_solver.hpp"

namespace ddtruss {

inline constexpr std::size_t kDefaultHeuristicCap = 10000;

struct HeuristicOptions {
  std::size_t max_iterations = kDefaultHeuristicCap;
  /// Stop (unconverged) when an assignment repeats.
  bool detect_cycles = false;
  /// Starting assignment; defaults to the nearest points to the zero state.
  std::optional<Assignment> initial;
};

struct HeuristicReport {
  bool converged = false;
  bool cycle_detected = false;
  std::size_t iterations = 0;
  MechanicalState state;   // solved for `assignment`
  Assignment assignment;
  std::vector<double> objective_trace;  // J after each state solve
};

/// Per-member nearest data point to (ε, σ) = (0, 0).
Assignment zero_state_assignment(const StateSolver& solver);

/// Per-member nearest data point to the member states of `state`.
Assignment nearest_assignment(const StateSolver& solver, const MechanicalState& state);

/// Alternating fixed-point iteration: solve the state for the current
/// assignment, then move every member to its nearest data point. Converged
/// when the reassignment changes nothing. One iteration is one state solve
/// plus one reassignment.
HeuristicReport solve_heuristic(const StateSolver& solver, const Eigen::VectorXd& load,
                                const HeuristicOptions& options = {});

}  // namespace ddtruss
