#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ddtruss {

/// Nodal position in meters. `z` is ignored for planar models.
struct Node {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Member as declared in input: end node indices and cross-sectional area (m²).
struct MemberSpec {
  std::size_t start = 0;
  std::size_t end = 0;
  double area = 0.0;
};

/// Member with derived geometry. `direction` is the unit vector start -> end.
struct Member {
  std::size_t start = 0;
  std::size_t end = 0;
  double area = 0.0;
  double length = 0.0;
  double volume = 0.0;
  Eigen::Vector3d direction = Eigen::Vector3d::Zero();
};

/// A displacement component of a node; axis 0 = x, 1 = y, 2 = z.
struct DofRef {
  std::size_t node = 0;
  int axis = 0;
};

/// Reference nodal force (N per unit load multiplier).
struct PointLoad {
  std::size_t node = 0;
  int axis = 0;
  double newtons = 0.0;
};

/// Pin-jointed truss under small deformation.
///
/// Free DOFs are numbered node by node in declaration order, x before y
/// before z, with fixed components removed. Column i of `compatibility()` is
/// the vector b_i mapping free displacements to the axial strain of member i.
/// Immutable after construction.
class TrussModel {
 public:
  int dimension() const { return dimension_; }
  std::size_t num_dofs() const { return static_cast<std::size_t>(compatibility_.rows()); }
  std::size_t num_members() const { return members_.size(); }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Member>& members() const { return members_; }
  const std::vector<DofRef>& fixed_dofs() const { return fixed_dofs_; }
  const std::vector<PointLoad>& loads() const { return loads_; }

  /// n x m matrix whose columns are the compatibility vectors b_i.
  const Eigen::MatrixXd& compatibility() const { return compatibility_; }
  /// Member volumes v_i (m³).
  const Eigen::VectorXd& volumes() const { return volumes_; }
  /// Reference load p̂ (N); the applied load at multiplier λ is λ·p̂.
  const Eigen::VectorXd& load_pattern() const { return load_pattern_; }

  /// Free-DOF index of a nodal displacement component, or nullopt if fixed.
  std::optional<std::size_t> dof_index(std::size_t node, int axis) const;
  /// Inverse of dof_index.
  DofRef dof_ref(std::size_t dof) const { return dof_refs_.at(dof); }

 private:
  friend TrussModel build_model(std::vector<Node>, std::vector<MemberSpec>,
                                std::vector<DofRef>, std::vector<PointLoad>, int);

  int dimension_ = 2;
  std::vector<Node> nodes_;
  std::vector<Member> members_;
  std::vector<DofRef> fixed_dofs_;
  std::vector<PointLoad> loads_;
  std::vector<long> dof_map_;  // node * dimension + axis -> free index or -1
  std::vector<DofRef> dof_refs_;
  Eigen::MatrixXd compatibility_;
  Eigen::VectorXd volumes_;
  Eigen::VectorXd load_pattern_;
};

/// Builds and validates a truss. Throws Error with kInvalidModel,
/// kZeroLengthMember or kKinematicallyIndeterminate.
TrussModel build_model(std::vector<Node> nodes, std::vector<MemberSpec> members,
                       std::vector<DofRef> fixed_dofs, std::vector<PointLoad> loads,
                       int dimension = 2);

/// The two-bay 10-bar cantilever: 3.6 m bays and height, left nodes pinned,
/// 0.4 kN downward per unit multiplier at the two free bottom nodes.
///
/// Node order: 0 (0,0), 1 (3.6,0), 2 (7.2,0), 3 (0,3.6), 4 (3.6,3.6),
/// 5 (7.2,3.6). Nodes 0 and 3 are pinned.
TrussModel builtin_ten_bar(double area = 1.0e-3);

inline constexpr double kTenBarSpacing = 3.6;
inline constexpr double kTenBarNodeLoad = -400.0;
/// Free-DOF index of the vertical displacement of the bottom-right node.
inline constexpr std::size_t kTenBarMonitorDof = 3;

/// λ·p̂.
Eigen::VectorXd load_vector(const TrussModel& model, double multiplier);

/// JSON truss description; see README for the schema.
TrussModel read_truss(std::istream& in, const std::string& source_name = "<stream>");
TrussModel load_truss_file(const std::filesystem::path& path);
void write_truss(const TrussModel& model, std::ostream& out);

}  // namespace ddtruss
