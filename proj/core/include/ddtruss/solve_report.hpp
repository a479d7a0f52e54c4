#pragma once

#include <cstddef>
#include <string_view>

#include "ddtruss/state_solver.hpp"

namespace ddtruss {

enum class SolveStatus { kOptimal, kGapReached, kTimeLimit, kNodeLimit };

std::string_view to_string(SolveStatus status);

/// Outcome of a global solve (branch-and-bound or exhaustive enumeration).
struct ExactReport {
  double objective = 0.0;  // J
  MechanicalState state;
  Assignment assignment;
  std::size_t nodes_explored = 0;
  double wall_time_s = 0.0;
  /// (incumbent − best remaining bound) / max(1, |incumbent|); 0 when Optimal.
  double gap = 0.0;
  /// Best remaining lower bound at termination (equals objective when Optimal).
  double best_bound = 0.0;
  SolveStatus status = SolveStatus::kOptimal;
};

}  // namespace ddtruss
