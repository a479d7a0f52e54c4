#include "ddtruss/heuristic.hpp"

#include <set>

#include "ddtruss/error.hpp"

namespace ddtruss {

Assignment zero_state_assignment(const StateSolver& solver) {
  const TrussModel& model = solver.model();
  Assignment a;
  a.index.resize(model.num_members());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.index[i] =
        nearest_point(0.0, 0.0, solver.c(), model.volumes()[static_cast<Eigen::Index>(i)], solver.dataset()).index;
  }
  return a;
}

Assignment nearest_assignment(const StateSolver& solver, const MechanicalState& state) {
  const TrussModel& model = solver.model();
  Assignment a;
  a.index.resize(model.num_members());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    a.index[i] = nearest_point(state.strain[k], state.stress[k], solver.c(), model.volumes()[k], solver.dataset()).index;
  }
  return a;
}

HeuristicReport solve_heuristic(const StateSolver& solver, const Eigen::VectorXd& load,
                                const HeuristicOptions& options) {
  if (options.max_iterations == 0) {
    throw Error(ErrorKind::kInvalidArgument, "heuristic iteration cap must be at least 1");
  }
  HeuristicReport report;
  report.assignment = options.initial ? *options.initial : zero_state_assignment(solver);

  std::set<std::vector<std::size_t>> visited;
  while (report.iterations < options.max_iterations) {
    ++report.iterations;
    report.state = solver.solve(report.assignment, load);
    report.objective_trace.push_back(report.state.objective);

    Assignment next = nearest_assignment(solver, report.state);
    if (next == report.assignment) {
      report.converged = true;
      break;
    }
    if (options.detect_cycles) {
      visited.insert(report.assignment.index);
      if (visited.contains(next.index)) {
        report.cycle_detected = true;
        break;
      }
    }
    if (report.iterations == options.max_iterations) {
      break;  // keep state and assignment consistent
    }
    report.assignment = std::move(next);
  }
  return report;
}

}  // namespace ddtruss
