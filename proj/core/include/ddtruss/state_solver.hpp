#pragma once

#include <atomic>
#include <cstddef>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "ddtruss/dataset.hpp"
#include "ddtruss/truss_model.hpp"

namespace ddtruss {

/// Data-point index per member (0-based). Collapsed form of the binary
/// selection t: member i uses point index[i] and no other.
struct Assignment {
  std::vector<std::size_t> index;

  std::size_t size() const { return index.size(); }
  std::size_t operator[](std::size_t i) const { return index[i]; }
  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

/// Solution of the data-driven problem for one choice of targets (e, s).
struct MechanicalState {
  Eigen::VectorXd displacement;  // u (m), length n
  Eigen::VectorXd strain;        // ε = Bᵀu, length m
  Eigen::VectorXd stress;        // σ (Pa), length m
  Eigen::VectorXd data_strain;   // e
  Eigen::VectorXd data_stress;   // s (Pa)
  double objective = 0.0;        // J
};

/// K = Σ_i v_i c b_i b_iᵀ with a cached Cholesky factor.
///
/// Holds atomic counters, so it is neither copyable nor movable; build it in place.
class ReferenceStiffness {
 public:
  /// Throws kNotPositiveDefinite.
  ReferenceStiffness(const TrussModel& model, double c);
  ReferenceStiffness(const ReferenceStiffness&) = delete;
  ReferenceStiffness& operator=(const ReferenceStiffness&) = delete;

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  std::size_t factorizations() const { return factorizations_; }
  std::size_t solve_count() const { return solves_.load(std::memory_order_relaxed); }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  std::size_t factorizations_ = 0;
  mutable std::atomic<std::size_t> solves_{0};
};

/// Closed-form minimizer of the data-driven objective with the data targets held fixed.
///
/// With targets (e, s) and load p:
///   K u = Σ v_i c e_i b_i,   K η = p − Σ v_i s_i b_i,
///   ε_i = b_iᵀu,             σ_i = s_i + c b_iᵀη.
/// The u- and σ-parts are independent; both reuse the same factorization.
///
/// Holds references to `model` and `dataset`; both must outlive the solver.
class StateSolver {
 public:
  StateSolver(const TrussModel& model, const MaterialDataset& dataset, double c);

  MechanicalState solve(const Assignment& assignment, const Eigen::VectorXd& load) const;
  /// Same kernel for arbitrary targets (used by the relaxation bound).
  MechanicalState solve_targets(const Eigen::VectorXd& data_strain, const Eigen::VectorXd& data_stress,
                                const Eigen::VectorXd& load) const;

  const TrussModel& model() const { return model_; }
  const MaterialDataset& dataset() const { return dataset_; }
  double c() const { return c_; }
  const ReferenceStiffness& stiffness() const { return stiffness_; }

 private:
  const TrussModel& model_;
  const MaterialDataset& dataset_;
  double c_;
  ReferenceStiffness stiffness_;
};

/// Σ_i (v_i c/2)(ε_i − e_i)² + (v_i/(2c))(σ_i − s_i)², recomputed from the raw fields.
double objective_of(const MechanicalState& state, const TrussModel& model, double c);

/// ‖Σ v_i σ_i b_i − p‖₂
double equilibrium_residual(const MechanicalState& state, const TrussModel& model,
                            const Eigen::VectorXd& load);

}  // namespace ddtruss
