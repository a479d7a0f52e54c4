#include "ddtruss/miqp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <queue>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "ddtruss/error.hpp"

namespace ddtruss {

std::size_t PartialAssignment::num_free() const {
  return static_cast<std::size_t>(std::count(fixed_.begin(), fixed_.end(), kFree));
}

Assignment PartialAssignment::to_assignment() const {
  if (!complete()) {
    throw Error(ErrorKind::kInvalidArgument, "partial assignment still has free members");
  }
  return Assignment{fixed_};
}

std::string_view to_string(BoundStrategy strategy) {
  return strategy == BoundStrategy::kDropFree ? "drop-free" : "hull";
}

BoundStrategy parse_bound_strategy(std::string_view text) {
  if (text == "drop-free") return BoundStrategy::kDropFree;
  if (text == "hull") return BoundStrategy::kConvexHull;
  throw Error(ErrorKind::kInvalidArgument, fmt::format("unknown bound strategy '{}' (drop-free|hull)", text));
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kGapReached:
      return "GapReached";
    case SolveStatus::kTimeLimit:
      return "TimeLimit";
    case SolveStatus::kNodeLimit:
      return "NodeLimit";
  }
  return "Unknown";
}

namespace {

using Point2 = std::pair<double, double>;

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

// Andrew's monotone chain; returns indices of the counter-clockwise hull with
// collinear points dropped. Duplicate points keep the lowest index.
std::vector<std::size_t> convex_hull(const std::vector<Point2>& pts) {
  std::vector<std::size_t> order(pts.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a] != pts[b]) return pts[a] < pts[b];
    return a < b;
  });
  order.erase(std::unique(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] == pts[b]; }),
              order.end());
  if (order.size() <= 2) {
    return order;
  }
  std::vector<std::size_t> hull(2 * order.size());
  std::size_t k = 0;
  for (std::size_t idx : order) {
    while (k >= 2 && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[idx]) <= 0.0) --k;
    hull[k++] = idx;
  }
  for (std::size_t t = order.size() - 1, lower = k + 1; t-- > 0;) {
    const std::size_t idx = order[t];
    while (k >= lower && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[idx]) <= 0.0) --k;
    hull[k++] = idx;
  }
  hull.resize(k - 1);
  return hull;
}

Point2 project_to_segment(const Point2& q, const Point2& a, const Point2& b) {
  const double dx = b.first - a.first;
  const double dy = b.second - a.second;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return a;
  double t = ((q.first - a.first) * dx + (q.second - a.second) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return {a.first + t * dx, a.second + t * dy};
}

double dist2(const Point2& a, const Point2& b) {
  const double dx = a.first - b.first;
  const double dy = a.second - b.second;
  return dx * dx + dy * dy;
}

}  // namespace

NodeBounder::NodeBounder(const StateSolver& solver, const Eigen::VectorXd& load, BoundStrategy strategy,
                         BoundOptions options)
    : solver_(solver), load_(load), strategy_(strategy), options_(options) {
  const MaterialDataset& data = solver.dataset();
  const double rc = std::sqrt(solver.c());
  std::vector<Point2> scaled(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) {
    scaled[j] = {rc * data[j].strain, data[j].stress / rc};
  }
  hull_ = convex_hull(scaled);
  for (std::size_t j : hull_) hull_scaled_.push_back(scaled[j]);
}

std::pair<double, double> NodeBounder::project_to_hull(double strain, double stress) const {
  const double rc = std::sqrt(solver_.c());
  const Point2 q{rc * strain, stress / rc};
  Point2 best;
  const std::size_t h = hull_scaled_.size();
  if (h == 1) {
    best = hull_scaled_[0];
  } else if (h == 2) {
    best = project_to_segment(q, hull_scaled_[0], hull_scaled_[1]);
  } else {
    bool inside = true;
    for (std::size_t k = 0; k < h && inside; ++k) {
      inside = cross(hull_scaled_[k], hull_scaled_[(k + 1) % h], q) >= 0.0;
    }
    if (inside) {
      return {strain, stress};
    }
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < h; ++k) {
      const Point2 p = project_to_segment(q, hull_scaled_[k], hull_scaled_[(k + 1) % h]);
      const double d = dist2(p, q);
      if (d < best_d) {
        best_d = d;
        best = p;
      }
    }
  }
  return {best.first / rc, best.second * rc};
}

double NodeBounder::member_dual_term(const Relaxation& rel, std::size_t member, std::size_t data_index) const {
  const auto i = static_cast<Eigen::Index>(member);
  const double v = solver_.model().volumes()[i];
  const double c = solver_.c();
  const double a = rel.dual_a[i];
  const double beta = rel.dual_beta[i];
  const MaterialPoint& p = solver_.dataset()[data_index];
  return -0.5 * v * c * a * a - v * c * a * (p.strain - rel.dual_strain[i]) - 0.5 * v * c * beta * beta -
         v * beta * (p.stress - rel.dual_stress[i]);
}

double NodeBounder::dual_value(const PartialAssignment& partial, const MechanicalState& state, Relaxation& out) const {
  const double c = solver_.c();
  const auto m = static_cast<Eigen::Index>(partial.size());
  out.has_dual = true;
  out.dual_strain = state.strain;
  out.dual_stress = state.stress;
  out.dual_a = state.strain - state.data_strain;
  out.dual_beta = (state.stress - state.data_stress) / c;
  out.member_term.resize(m);
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto member = static_cast<std::size_t>(i);
    double term;
    if (!partial.is_free(member)) {
      term = member_dual_term(out, member, partial.fixed_index(member));
    } else {
      // A linear function attains its minimum over the data at a hull vertex.
      term = std::numeric_limits<double>::infinity();
      for (std::size_t j : hull_) {
        term = std::min(term, member_dual_term(out, member, j));
      }
    }
    out.member_term[i] = term;
    total += term;
  }
  return total;
}

double NodeBounder::child_bound(const Relaxation& parent, std::size_t member, std::size_t data_index) const {
  if (!parent.has_dual) {
    return parent.bound;
  }
  const auto i = static_cast<Eigen::Index>(member);
  const double dual = parent.member_term.sum() - parent.member_term[i] + member_dual_term(parent, member, data_index);
  return std::max(parent.bound, dual);
}

Relaxation NodeBounder::evaluate(const PartialAssignment& partial, double cutoff, const Relaxation* warm) const {
  if (partial.size() != solver_.model().num_members()) {
    throw Error(ErrorKind::kInvalidArgument, "partial assignment size does not match the model");
  }
  if (strategy_ == BoundStrategy::kDropFree) {
    return evaluate_drop_free(partial);
  }
  return evaluate_hull(partial, cutoff, warm);
}

namespace {
// Relative singular-value cutoff for the drop-free least-squares solves.
constexpr double kRankTolerance = 1e-9;
}  // namespace

Relaxation NodeBounder::evaluate_drop_free(const PartialAssignment& partial) const {
  const TrussModel& model = solver_.model();
  const MaterialDataset& data = solver_.dataset();
  const Eigen::MatrixXd& b = model.compatibility();
  const Eigen::VectorXd& vol = model.volumes();
  const double c = solver_.c();
  const auto n = b.rows();
  const auto m = b.cols();

  std::vector<Eigen::Index> fixed;
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < m; ++i) {
    (partial.is_free(static_cast<std::size_t>(i)) ? free : fixed).push_back(i);
  }
  const auto nf = static_cast<Eigen::Index>(fixed.size());
  const auto nr = static_cast<Eigen::Index>(free.size());

  Relaxation rel;
  rel.data_strain = Eigen::VectorXd::Zero(m);
  rel.data_stress = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i : fixed) {
    const MaterialPoint& p = data[partial.fixed_index(static_cast<std::size_t>(i))];
    rel.data_strain[i] = p.strain;
    rel.data_stress[i] = p.stress;
  }

  // Displacement part: weighted least squares over the fixed members only.
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  double value_u = 0.0;
  if (nf > 0) {
    Eigen::MatrixXd a(nf, n);
    Eigen::VectorXd r(nf);
    for (Eigen::Index k = 0; k < nf; ++k) {
      const Eigen::Index i = fixed[static_cast<std::size_t>(k)];
      const double w = std::sqrt(vol[i] * c);
      a.row(k) = w * b.col(i).transpose();
      r[k] = w * rel.data_strain[i];
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    cod.setThreshold(kRankTolerance);
    u = cod.solve(r);
    value_u = 0.5 * (a * u - r).squaredNorm();
  }

  // Stress part: free members absorb any load component in the span of their
  // v_i b_i; the fixed members must balance the rest at least distance.
  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(m);
  double value_s = 0.0;
  Eigen::MatrixXd g_free(n, nr);
  for (Eigen::Index k = 0; k < nr; ++k) {
    const Eigen::Index i = free[static_cast<std::size_t>(k)];
    g_free.col(k) = vol[i] * b.col(i);
  }
  Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n);
  if (nr > 0) {
    // Overstating this rank only relaxes the constraint below, so keep the threshold tight.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(g_free);
    qr.setThreshold(1e-13);
    const Eigen::Index rank = qr.rank();
    if (rank > 0) {
      const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, rank);
      proj -= q * q.transpose();
    }
  }
  Eigen::VectorXd balanced = load_;
  if (nf > 0) {
    Eigen::MatrixXd mat(n, nf);
    Eigen::VectorXd rhs = load_;
    for (Eigen::Index k = 0; k < nf; ++k) {
      const Eigen::Index i = fixed[static_cast<std::size_t>(k)];
      mat.col(k) = std::sqrt(c * vol[i]) * b.col(i);
      rhs -= vol[i] * rel.data_stress[i] * b.col(i);
    }
    // Columns lying in the free span project to rounding noise. Singular values
    // are cut against the unprojected scale; dropping a direction only lowers z.
    const double scale = mat.norm();
    mat = proj * mat;
    rhs = proj * rhs;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(nf);
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      const double sv = svd.singularValues()[k];
      if (sv > kRankTolerance * scale) {
        z += svd.matrixV().col(k) * (svd.matrixU().col(k).dot(rhs) / sv);
      }
    }
    value_s = 0.5 * z.squaredNorm();
    for (Eigen::Index k = 0; k < nf; ++k) {
      const Eigen::Index i = fixed[static_cast<std::size_t>(k)];
      sigma[i] = rel.data_stress[i] + z[k] * std::sqrt(c / vol[i]);
      balanced -= vol[i] * sigma[i] * b.col(i);
    }
  }
  if (nr > 0) {
    const Eigen::VectorXd sr = g_free.completeOrthogonalDecomposition().solve(balanced);
    for (Eigen::Index k = 0; k < nr; ++k) {
      sigma[free[static_cast<std::size_t>(k)]] = sr[k];
    }
  }

  rel.strain = b.transpose() * u;
  rel.stress = sigma;
  for (Eigen::Index i : free) {
    rel.data_strain[i] = rel.strain[i];
    rel.data_stress[i] = rel.stress[i];
  }
  rel.bound = value_u + value_s;
  rel.iterations = 1;
  return rel;
}

Relaxation NodeBounder::evaluate_hull(const PartialAssignment& partial, double cutoff, const Relaxation* warm) const {
  const MaterialDataset& data = solver_.dataset();
  const auto m = static_cast<Eigen::Index>(partial.size());

  Eigen::VectorXd e(m);
  Eigen::VectorXd s(m);
  bool any_free = false;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto member = static_cast<std::size_t>(i);
    if (!partial.is_free(member)) {
      e[i] = data[partial.fixed_index(member)].strain;
      s[i] = data[partial.fixed_index(member)].stress;
    } else {
      any_free = true;
      if (warm != nullptr && warm->data_strain.size() == m) {
        e[i] = warm->data_strain[i];
        s[i] = warm->data_stress[i];
      } else {
        std::tie(e[i], s[i]) = project_to_hull(0.0, 0.0);
      }
    }
  }

  Relaxation best;
  best.bound = -std::numeric_limits<double>::infinity();
  Relaxation scratch;
  MechanicalState state;
  std::size_t it = 0;
  while (true) {
    ++it;
    state = solver_.solve_targets(e, s, load_);
    const double dual = dual_value(partial, state, scratch);
    if (dual > best.bound) {
      scratch.bound = dual;
      std::swap(best, scratch);
    }
    const double primal = state.objective;
    if (!any_free || best.bound >= cutoff || it >= options_.max_iterations ||
        primal - best.bound <= options_.rel_tolerance * primal) {
      break;
    }
    bool moved = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!partial.is_free(static_cast<std::size_t>(i))) continue;
      const auto [pe, ps] = project_to_hull(state.strain[i], state.stress[i]);
      moved = moved || pe != e[i] || ps != s[i];
      e[i] = pe;
      s[i] = ps;
    }
    if (!moved) break;
  }

  // The objective is non-negative, so 0 is always a valid bound.
  best.bound = std::max(best.bound, 0.0);
  best.strain = state.strain;
  best.stress = state.stress;
  best.data_strain = e;
  best.data_stress = s;
  best.iterations = it;
  return best;
}

double lower_bound(const BnBNode& node, const StateSolver& solver, const Eigen::VectorXd& load,
                   BoundStrategy strategy) {
  const NodeBounder bounder(solver, load, strategy);
  return bounder.evaluate(node.partial).bound;
}

namespace {

// Squared weighted distances from member `i`'s relaxation point to every data point.
std::vector<double> candidate_distances(std::size_t member, const Relaxation& rel, const StateSolver& solver) {
  const auto i = static_cast<Eigen::Index>(member);
  const double v = solver.model().volumes()[i];
  const MaterialDataset& data = solver.dataset();
  std::vector<double> d(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) {
    d[j] = weighted_distance_sq(rel.strain[i], rel.stress[i], data[j], solver.c(), v);
  }
  return d;
}

}  // namespace

std::size_t select_branching_member(const PartialAssignment& partial, const Relaxation& relaxation,
                                    const StateSolver& solver) {
  std::size_t chosen = PartialAssignment::kFree;
  double chosen_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < partial.size(); ++i) {
    if (!partial.is_free(i)) continue;
    const std::vector<double> d = candidate_distances(i, relaxation, solver);
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = std::numeric_limits<double>::infinity();
    for (double x : d) {
      if (x < d1) {
        d2 = d1;
        d1 = x;
      } else if (x < d2) {
        d2 = x;
      }
    }
    double ratio;
    if (!std::isfinite(d2)) {
      ratio = std::numeric_limits<double>::infinity();
    } else if (d1 == 0.0) {
      ratio = d2 == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
      ratio = std::sqrt(d2 / d1);
    }
    if (chosen == PartialAssignment::kFree || ratio < chosen_ratio) {
      chosen = i;
      chosen_ratio = ratio;
    }
  }
  if (chosen == PartialAssignment::kFree) {
    throw Error(ErrorKind::kNoFreeMember, "branch called on a node with every member fixed");
  }
  return chosen;
}

std::vector<std::size_t> ordered_candidates(std::size_t member, const Relaxation& relaxation,
                                            const StateSolver& solver) {
  const std::vector<double> d = candidate_distances(member, relaxation, solver);
  std::vector<std::size_t> order(d.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  return order;
}

std::vector<BnBNode> branch(const BnBNode& node, const Relaxation& relaxation, const StateSolver& solver,
                            const NodeBounder* bounder) {
  const std::size_t member = select_branching_member(node.partial, relaxation, solver);
  std::vector<BnBNode> children;
  for (std::size_t j : ordered_candidates(member, relaxation, solver)) {
    BnBNode child{node.partial, node.lower_bound, node.depth + 1};
    child.partial.fix(member, j);
    if (bounder != nullptr) {
      child.lower_bound = std::max(node.lower_bound, bounder->child_bound(relaxation, member, j));
    }
    children.push_back(std::move(child));
  }
  return children;
}

namespace {

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

// Tree nodes are stored as (parent, member, data) links; a node's partial
// assignment is rebuilt by walking to the root.
struct TreeNode {
  std::uint32_t parent;
  std::uint32_t member;
  std::uint32_t data;
  std::uint32_t warm;  // slot in the warm-start table, for expanded nodes
};

struct PoolEntry {
  double bound;
  std::uint32_t depth;
  std::uint64_t seq;
  std::uint32_t node;
  double parent_bound;
};

// priority_queue keeps the "largest" on top; invert so the best node wins.
struct WorseEntry {
  bool operator()(const PoolEntry& a, const PoolEntry& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq > b.seq;
  }
};

struct WarmSlot {
  Relaxation relaxation;
  std::size_t pending = 0;
};

}  // namespace

ExactReport solve_exact(const StateSolver& solver, const Eigen::VectorXd& load, const ExactOptions& options) {
  if (!(options.gap_tol >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "gap tolerance must be non-negative");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const std::size_t m = solver.model().num_members();
  const NodeBounder bounder(solver, load, options.bound, options.bound_options);

  ExactReport report;
  double incumbent = std::numeric_limits<double>::infinity();
  const auto offer = [&](const Assignment& a, MechanicalState&& state) {
    if (state.objective < incumbent) {
      incumbent = state.objective;
      report.assignment = a;
      report.state = std::move(state);
    }
  };

  if (options.heuristic_incumbent) {
    HeuristicReport h = solve_heuristic(solver, load, options.heuristic);
    offer(h.assignment, std::move(h.state));
  }

  std::vector<TreeNode> tree;
  std::vector<WarmSlot> warm;
  std::vector<std::size_t> free_warm;
  std::priority_queue<PoolEntry, std::vector<PoolEntry>, WorseEntry> pool;
  std::uint64_t seq = 0;

  tree.push_back({kNoParent, 0, 0, kNoParent});
  pool.push({0.0, 0, seq++, 0, -std::numeric_limits<double>::infinity()});

  const auto cutoff = [&] { return options.pruning ? incumbent - kPruneTolerance : std::numeric_limits<double>::infinity(); };
  const auto release_parent_warm = [&](std::uint32_t node) {
    const std::uint32_t parent = tree[node].parent;
    if (parent == kNoParent) return;
    WarmSlot& slot = warm[tree[parent].warm];
    if (--slot.pending == 0) {
      slot.relaxation = Relaxation{};
      free_warm.push_back(tree[parent].warm);
    }
  };
  const auto rebuild = [&](std::uint32_t node) {
    PartialAssignment partial(m);
    for (std::uint32_t k = node; tree[k].parent != kNoParent; k = tree[k].parent) {
      partial.fix(tree[k].member, tree[k].data);
    }
    return partial;
  };
  const auto emit = [&](const PartialAssignment& partial, const PoolEntry& entry, double bound, bool leaf,
                        bool pruned) {
    if (!options.observer) return;
    const double pool_min = pool.empty() ? std::numeric_limits<double>::infinity() : pool.top().bound;
    options.observer(NodeEvent{partial, entry.depth, bound, entry.parent_bound, leaf, incumbent, pool_min, pruned});
  };

  report.status = SolveStatus::kOptimal;
  while (!pool.empty()) {
    const double best = pool.top().bound;
    if (options.pruning) {
      if (best >= incumbent - kPruneTolerance) break;
      if (incumbent - best <= options.gap_tol * std::max(1.0, std::abs(incumbent))) {
        report.status = SolveStatus::kGapReached;
        break;
      }
    }
    if (report.nodes_explored >= options.node_limit) {
      report.status = SolveStatus::kNodeLimit;
      break;
    }
    if (options.time_limit_s && elapsed() >= *options.time_limit_s) {
      report.status = SolveStatus::kTimeLimit;
      break;
    }

    const PoolEntry entry = pool.top();
    pool.pop();
    const Relaxation* parent_rel =
        tree[entry.node].parent == kNoParent ? nullptr : &warm[tree[tree[entry.node].parent].warm].relaxation;
    ++report.nodes_explored;
    const PartialAssignment partial = rebuild(entry.node);

    if (partial.complete()) {
      release_parent_warm(entry.node);
      const Assignment a = partial.to_assignment();
      MechanicalState state = solver.solve(a, load);
      const double value = state.objective;
      offer(a, std::move(state));
      emit(partial, entry, value, true, false);
      continue;
    }

    Relaxation rel = bounder.evaluate(partial, cutoff(), parent_rel);
    release_parent_warm(entry.node);
    rel.bound = std::max(rel.bound, entry.bound);
    if (rel.bound >= cutoff()) {
      emit(partial, entry, rel.bound, false, true);
      continue;
    }

    if (options.rounding) {
      Assignment rounded;
      rounded.index.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        rounded.index[i] = partial.is_free(i) ? nearest_point(rel.strain[k], rel.stress[k], solver.c(),
                                                              solver.model().volumes()[k], solver.dataset())
                                                    .index
                                              : partial.fixed_index(i);
      }
      offer(rounded, solver.solve(rounded, load));
    }

    const std::size_t member = select_branching_member(partial, rel, solver);
    const double node_bound = rel.bound;
    std::size_t pushed = 0;
    const auto node_id = entry.node;
    for (std::size_t j : ordered_candidates(member, rel, solver)) {
      const double child = std::max(rel.bound, bounder.child_bound(rel, member, j));
      if (child >= cutoff()) continue;
      tree.push_back({node_id, static_cast<std::uint32_t>(member), static_cast<std::uint32_t>(j), kNoParent});
      pool.push({child, entry.depth + 1, seq++, static_cast<std::uint32_t>(tree.size() - 1), rel.bound});
      ++pushed;
    }
    if (pushed > 0) {
      std::size_t slot;
      if (!free_warm.empty()) {
        slot = free_warm.back();
        free_warm.pop_back();
      } else {
        slot = warm.size();
        warm.emplace_back();
      }
      warm[slot].relaxation = std::move(rel);
      warm[slot].pending = pushed;
      tree[node_id].warm = static_cast<std::uint32_t>(slot);
    }
    emit(partial, entry, node_bound, false, false);
  }

  report.objective = incumbent;
  report.wall_time_s = elapsed();
  if (report.status == SolveStatus::kOptimal) {
    report.best_bound = incumbent;
    report.gap = 0.0;
  } else {
    report.best_bound = pool.empty() ? incumbent : std::min(incumbent, pool.top().bound);
    report.gap = std::isfinite(incumbent) ? (incumbent - report.best_bound) / std::max(1.0, std::abs(incumbent))
                                          : std::numeric_limits<double>::infinity();
  }
  return report;
}

}  // namespace ddtruss
