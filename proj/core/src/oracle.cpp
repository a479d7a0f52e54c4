#include "ddtruss/oracle.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "ddtruss/error.hpp"

namespace ddtruss {

ExactReport brute_force(const StateSolver& solver, const Eigen::VectorXd& load, std::size_t enumeration_limit) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t m = solver.model().num_members();
  const std::size_t d = solver.dataset().size();

  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (total > enumeration_limit / d) {
      throw Error(ErrorKind::kTooLarge,
                  fmt::format("{}^{} = {:.4g} assignments exceeds the enumeration limit {}", d, m,
                              std::pow(static_cast<double>(d), static_cast<double>(m)), enumeration_limit));
    }
    total *= d;
  }
  if (total > enumeration_limit) {
    throw Error(ErrorKind::kTooLarge,
                fmt::format("{}^{} = {} assignments exceeds the enumeration limit {}", d, m, total, enumeration_limit));
  }

  ExactReport report;
  report.objective = std::numeric_limits<double>::infinity();
  Assignment current{std::vector<std::size_t>(m, 0)};
  for (std::size_t count = 0; count < total; ++count) {
    MechanicalState state = solver.solve(current, load);
    if (state.objective < report.objective) {
      report.objective = state.objective;
      report.state = std::move(state);
      report.assignment = current;
    }
    // odometer increment, last member fastest
    for (std::size_t i = m; i-- > 0;) {
      if (++current.index[i] < d) break;
      current.index[i] = 0;
    }
  }
  report.nodes_explored = total;
  report.status = SolveStatus::kOptimal;
  report.gap = 0.0;
  report.best_bound = report.objective;
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace ddtruss
