#include "ddtruss/truss_model.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <json.hpp>

#include "ddtruss/error.hpp"

namespace ddtruss {
namespace {

// Relative eigenvalue floor of Σ v_i b_i b_iᵀ below which the truss is a mechanism.
constexpr double kDeterminacyTolerance = 1e-12;

double coordinate(const Node& node, int axis) {
  switch (axis) {
    case 0:
      return node.x;
    case 1:
      return node.y;
    default:
      return node.z;
  }
}

void check_axis(int axis, int dimension, std::string_view what) {
  if (axis < 0 || axis >= dimension) {
    throw Error(ErrorKind::kInvalidModel,
                fmt::format("{} refers to axis {} in a {}-D model", what, axis, dimension));
  }
}

}  // namespace

std::optional<std::size_t> TrussModel::dof_index(std::size_t node, int axis) const {
  if (node >= nodes_.size() || axis < 0 || axis >= dimension_) {
    return std::nullopt;
  }
  const long idx = dof_map_[node * static_cast<std::size_t>(dimension_) + static_cast<std::size_t>(axis)];
  if (idx < 0) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(idx);
}

TrussModel build_model(std::vector<Node> nodes, std::vector<MemberSpec> members,
                       std::vector<DofRef> fixed_dofs, std::vector<PointLoad> loads,
                       int dimension) {
  if (dimension != 2 && dimension != 3) {
    throw Error(ErrorKind::kInvalidModel, fmt::format("unsupported dimension {}", dimension));
  }
  if (nodes.empty() || members.empty()) {
    throw Error(ErrorKind::kInvalidModel, "model needs at least one node and one member");
  }
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Node& nd = nodes[k];
    if (!std::isfinite(nd.x) || !std::isfinite(nd.y) || !std::isfinite(nd.z)) {
      throw Error(ErrorKind::kInvalidModel, fmt::format("node {} has a non-finite coordinate", k));
    }
  }

  TrussModel model;
  model.dimension_ = dimension;
  const auto dim = static_cast<std::size_t>(dimension);

  std::vector<bool> fixed(nodes.size() * dim, false);
  for (const DofRef& f : fixed_dofs) {
    if (f.node >= nodes.size()) {
      throw Error(ErrorKind::kInvalidModel, fmt::format("fixed dof refers to missing node {}", f.node));
    }
    check_axis(f.axis, dimension, "fixed dof");
    fixed[f.node * dim + static_cast<std::size_t>(f.axis)] = true;
  }

  model.dof_map_.assign(nodes.size() * dim, -1);
  long next = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    for (std::size_t a = 0; a < dim; ++a) {
      if (!fixed[k * dim + a]) {
        model.dof_map_[k * dim + a] = next++;
        model.dof_refs_.push_back({k, static_cast<int>(a)});
      }
    }
  }
  if (next == 0) {
    throw Error(ErrorKind::kInvalidModel, "model has no free degrees of freedom");
  }
  const auto n = static_cast<Eigen::Index>(next);
  const auto m = static_cast<Eigen::Index>(members.size());

  model.compatibility_ = Eigen::MatrixXd::Zero(n, m);
  model.volumes_.resize(m);
  model.members_.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const MemberSpec& spec = members[i];
    if (spec.start >= nodes.size() || spec.end >= nodes.size()) {
      throw Error(ErrorKind::kInvalidModel, fmt::format("member {} refers to a missing node", i));
    }
    if (spec.start == spec.end) {
      throw Error(ErrorKind::kZeroLengthMember, fmt::format("member {} connects node {} to itself", i, spec.start));
    }
    if (!(spec.area > 0.0) || !std::isfinite(spec.area)) {
      throw Error(ErrorKind::kInvalidModel, fmt::format("member {} has non-positive area {}", i, spec.area));
    }
    Eigen::Vector3d delta = Eigen::Vector3d::Zero();
    for (std::size_t a = 0; a < dim; ++a) {
      delta[static_cast<Eigen::Index>(a)] =
          coordinate(nodes[spec.end], static_cast<int>(a)) - coordinate(nodes[spec.start], static_cast<int>(a));
    }
    const double length = delta.norm();
    if (!(length > 0.0)) {
      throw Error(ErrorKind::kZeroLengthMember, fmt::format("member {} has zero length", i));
    }

    Member member;
    member.start = spec.start;
    member.end = spec.end;
    member.area = spec.area;
    member.length = length;
    member.volume = spec.area * length;
    member.direction = delta / length;

    // ε = (dirᵀ(u_end − u_start)) / L
    for (std::size_t a = 0; a < dim; ++a) {
      const double coeff = member.direction[static_cast<Eigen::Index>(a)] / length;
      if (const long r = model.dof_map_[spec.end * dim + a]; r >= 0) {
        model.compatibility_(r, static_cast<Eigen::Index>(i)) += coeff;
      }
      if (const long r = model.dof_map_[spec.start * dim + a]; r >= 0) {
        model.compatibility_(r, static_cast<Eigen::Index>(i)) -= coeff;
      }
    }
    model.volumes_[static_cast<Eigen::Index>(i)] = member.volume;
    model.members_.push_back(member);
  }

  model.load_pattern_ = Eigen::VectorXd::Zero(n);
  for (const PointLoad& load : loads) {
    if (load.node >= nodes.size()) {
      throw Error(ErrorKind::kInvalidModel, fmt::format("load refers to missing node {}", load.node));
    }
    check_axis(load.axis, dimension, "load");
    if (!std::isfinite(load.newtons)) {
      throw Error(ErrorKind::kInvalidModel, "load value is not finite");
    }
    const long r = model.dof_map_[load.node * dim + static_cast<std::size_t>(load.axis)];
    // Loads on supported components are carried by the support.
    if (r >= 0) {
      model.load_pattern_[r] += load.newtons;
    }
  }

  const Eigen::MatrixXd stiffness =
      model.compatibility_ * model.volumes_.asDiagonal() * model.compatibility_.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(stiffness, Eigen::EigenvaluesOnly);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();
  if (!(lmax > 0.0) || lmin <= kDeterminacyTolerance * lmax) {
    throw Error(ErrorKind::kKinematicallyIndeterminate,
                fmt::format("compatibility vectors do not span the {} free DOFs (eigenvalue ratio {:.3e})",
                            n, lmax > 0.0 ? lmin / lmax : 0.0));
  }

  model.nodes_ = std::move(nodes);
  model.fixed_dofs_ = std::move(fixed_dofs);
  model.loads_ = std::move(loads);
  return model;
}

TrussModel builtin_ten_bar(double area) {
  if (!(area > 0.0)) {
    throw Error(ErrorKind::kInvalidModel, fmt::format("area must be positive, got {}", area));
  }
  constexpr double s = kTenBarSpacing;
  std::vector<Node> nodes = {
      {0.0, 0.0}, {s, 0.0}, {2 * s, 0.0},  // bottom chord
      {0.0, s},   {s, s},   {2 * s, s},    // top chord
  };
  std::vector<MemberSpec> members = {
      {3, 4, area}, {4, 5, area},  // top chords
      {0, 1, area}, {1, 2, area},  // bottom chords
      {1, 4, area}, {2, 5, area},  // verticals
      {3, 1, area}, {0, 4, area},  // left bay diagonals
      {4, 2, area}, {1, 5, area},  // right bay diagonals
  };
  std::vector<DofRef> fixed = {{0, 0}, {0, 1}, {3, 0}, {3, 1}};
  std::vector<PointLoad> loads = {{1, 1, kTenBarNodeLoad}, {2, 1, kTenBarNodeLoad}};
  return build_model(std::move(nodes), std::move(members), std::move(fixed), std::move(loads), 2);
}

Eigen::VectorXd load_vector(const TrussModel& model, double multiplier) {
  return multiplier * model.load_pattern();
}

namespace {

int parse_axis(const nlohmann::json& value, const std::string& where) {
  if (value.is_number_integer()) {
    return value.get<int>();
  }
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (s == "x") return 0;
    if (s == "y") return 1;
    if (s == "z") return 2;
  }
  throw Error(ErrorKind::kParseError, fmt::format("{}: axis must be 0/1/2 or \"x\"/\"y\"/\"z\"", where));
}

std::size_t parse_index(const nlohmann::json& value, const std::string& where) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw Error(ErrorKind::kParseError, fmt::format("{}: expected a non-negative integer index", where));
  }
  return value.get<std::size_t>();
}

const nlohmann::json& require_array(const nlohmann::json& doc, const char* key, const std::string& source) {
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    throw Error(ErrorKind::kParseError, fmt::format("{}: missing array \"{}\"", source, key));
  }
  return doc.at(key);
}

}  // namespace

TrussModel read_truss(std::istream& in, const std::string& source_name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParseError, fmt::format("{}: {}", source_name, e.what()));
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::kParseError, fmt::format("{}: top level must be an object", source_name));
  }

  try {
    const int dimension = doc.value("dimension", 2);

    std::vector<Node> nodes;
    const auto& jnodes = require_array(doc, "nodes", source_name);
    for (std::size_t k = 0; k < jnodes.size(); ++k) {
      const auto& row = jnodes[k];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(dimension)) {
        throw Error(ErrorKind::kParseError,
                    fmt::format("{}: nodes[{}] must have {} coordinates", source_name, k, dimension));
      }
      Node node;
      node.x = row[0].get<double>();
      node.y = row[1].get<double>();
      if (dimension == 3) node.z = row[2].get<double>();
      nodes.push_back(node);
    }

    std::vector<MemberSpec> members;
    const auto& jmembers = require_array(doc, "members", source_name);
    for (std::size_t k = 0; k < jmembers.size(); ++k) {
      const auto& row = jmembers[k];
      const std::string where = fmt::format("{}: members[{}]", source_name, k);
      if (!row.is_array() || row.size() != 3) {
        throw Error(ErrorKind::kParseError, where + " must be [i, j, area]");
      }
      members.push_back({parse_index(row[0], where), parse_index(row[1], where), row[2].get<double>()});
    }

    std::vector<DofRef> fixed;
    const auto& jfixed = require_array(doc, "fixed_dofs", source_name);
    for (std::size_t k = 0; k < jfixed.size(); ++k) {
      const auto& row = jfixed[k];
      const std::string where = fmt::format("{}: fixed_dofs[{}]", source_name, k);
      if (!row.is_array() || row.size() != 2) {
        throw Error(ErrorKind::kParseError, where + " must be [node, axis]");
      }
      fixed.push_back({parse_index(row[0], where), parse_axis(row[1], where)});
    }

    std::vector<PointLoad> loads;
    if (doc.contains("loads")) {
      const auto& jloads = require_array(doc, "loads", source_name);
      for (std::size_t k = 0; k < jloads.size(); ++k) {
        const auto& row = jloads[k];
        const std::string where = fmt::format("{}: loads[{}]", source_name, k);
        if (!row.is_array() || row.size() != 3) {
          throw Error(ErrorKind::kParseError, where + " must be [node, axis, newtons]");
        }
        loads.push_back({parse_index(row[0], where), parse_axis(row[1], where), row[2].get<double>()});
      }
    }
    return build_model(std::move(nodes), std::move(members), std::move(fixed), std::move(loads), dimension);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, fmt::format("{}: {}", source_name, e.what()));
  }
}

TrussModel load_truss_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kParseError, fmt::format("cannot open truss file {}", path.string()));
  }
  return read_truss(in, path.string());
}

void write_truss(const TrussModel& model, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["dimension"] = model.dimension();
  auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
  for (const Node& nd : model.nodes()) {
    if (model.dimension() == 3) {
      nodes.push_back({nd.x, nd.y, nd.z});
    } else {
      nodes.push_back({nd.x, nd.y});
    }
  }
  auto& members = doc["members"] = nlohmann::ordered_json::array();
  for (const Member& mb : model.members()) {
    members.push_back({mb.start, mb.end, mb.area});
  }
  auto& fixed = doc["fixed_dofs"] = nlohmann::ordered_json::array();
  for (const DofRef& f : model.fixed_dofs()) {
    fixed.push_back({f.node, f.axis});
  }
  auto& loads = doc["loads"] = nlohmann::ordered_json::array();
  for (const PointLoad& l : model.loads()) {
    loads.push_back({l.node, l.axis, l.newtons});
  }
  out << doc.dump(2) << '\n';
}

}  // namespace ddtruss
