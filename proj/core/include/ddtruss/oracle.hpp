#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "ddtruss/solve_report.hpp"
#include "ddtruss/state_solver.hpp"

namespace ddtruss {

inline constexpr std::size_t kDefaultEnumerationLimit = 1'000'000;

/// Exhaustive global solve: evaluates every one of the d^m assignments in
/// lexicographic order (last member varies fastest) and keeps the first one
/// achieving the minimum. No pruning of any kind.
///
/// Throws kTooLarge when d^m exceeds `enumeration_limit`.
ExactReport brute_force(const StateSolver& solver, const Eigen::VectorXd& load,
                        std::size_t enumeration_limit = kDefaultEnumerationLimit);

}  // namespace ddtruss
