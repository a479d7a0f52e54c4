#include "ddtruss/state_solver.hpp"

#include <fmt/format.h>

#include "ddtruss/error.hpp"

namespace ddtruss {

ReferenceStiffness::ReferenceStiffness(const TrussModel& model, double c) {
  if (!(c > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, fmt::format("weighting constant must be positive, got {}", c));
  }
  const Eigen::MatrixXd& b = model.compatibility();
  matrix_ = c * b * model.volumes().asDiagonal() * b.transpose();
  llt_.compute(matrix_);
  ++factorizations_;
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorKind::kNotPositiveDefinite, "reference stiffness is not positive definite");
  }
}

Eigen::VectorXd ReferenceStiffness::solve(const Eigen::VectorXd& rhs) const {
  solves_.fetch_add(1, std::memory_order_relaxed);
  return llt_.solve(rhs);
}

StateSolver::StateSolver(const TrussModel& model, const MaterialDataset& dataset, double c)
    : model_(model), dataset_(dataset), c_(c), stiffness_(model, c) {}

MechanicalState StateSolver::solve(const Assignment& assignment, const Eigen::VectorXd& load) const {
  const std::size_t m = model_.num_members();
  if (assignment.size() != m) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("assignment has {} entries for {} members", assignment.size(), m));
  }
  Eigen::VectorXd e(static_cast<Eigen::Index>(m));
  Eigen::VectorXd s(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (assignment[i] >= dataset_.size()) {
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("member {} assigned to missing data point {}", i, assignment[i]));
    }
    const MaterialPoint& p = dataset_[assignment[i]];
    e[static_cast<Eigen::Index>(i)] = p.strain;
    s[static_cast<Eigen::Index>(i)] = p.stress;
  }
  return solve_targets(e, s, load);
}

MechanicalState StateSolver::solve_targets(const Eigen::VectorXd& data_strain, const Eigen::VectorXd& data_stress,
                                           const Eigen::VectorXd& load) const {
  const Eigen::MatrixXd& b = model_.compatibility();
  const Eigen::VectorXd& v = model_.volumes();
  if (load.size() != b.rows()) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("load has {} entries for {} free DOFs", load.size(), b.rows()));
  }

  MechanicalState state;
  state.data_strain = data_strain;
  state.data_stress = data_stress;
  state.displacement = stiffness_.solve(b * (c_ * v.cwiseProduct(data_strain)));
  const Eigen::VectorXd eta = stiffness_.solve(load - b * v.cwiseProduct(data_stress));
  const Eigen::VectorXd beta = b.transpose() * eta;  // (σ − s)/c
  state.strain = b.transpose() * state.displacement;
  state.stress = data_stress + c_ * beta;

  // Stored objective goes through β rather than σ − s, so objective_of is an
  // independent recomputation.
  const Eigen::VectorXd de = state.strain - data_strain;
  state.objective = 0.5 * c_ * (v.dot(de.cwiseAbs2()) + v.dot(beta.cwiseAbs2()));
  return state;
}

double objective_of(const MechanicalState& state, const TrussModel& model, double c) {
  const Eigen::VectorXd& v = model.volumes();
  double total = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double de = state.strain[i] - state.data_strain[i];
    const double ds = state.stress[i] - state.data_stress[i];
    total += 0.5 * v[i] * c * de * de + 0.5 * (v[i] / c) * ds * ds;
  }
  return total;
}

double equilibrium_residual(const MechanicalState& state, const TrussModel& model, const Eigen::VectorXd& load) {
  return (model.compatibility() * model.volumes().cwiseProduct(state.stress) - load).norm();
}

}  // namespace ddtruss
