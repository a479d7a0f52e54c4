#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "ddtruss/heuristic.hpp"
#include "ddtruss/oracle.hpp"
#include "ddtruss/state_solver.hpp"

namespace ddtruss::cli {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotPositiveDefinite:
    case ErrorKind::kNoFreeMember:
      return kExitNumericalError;
    case ErrorKind::kTooLarge:
      return kExitSolverLimit;
    default:
      return kExitInputError;
  }
}

SolverKind parse_solver(const std::string& name) {
  if (name == "heuristic") return SolverKind::kHeuristic;
  if (name == "exact") return SolverKind::kExact;
  if (name == "oracle") return SolverKind::kOracle;
  throw Error(ErrorKind::kInvalidArgument, fmt::format("unknown solver '{}' (heuristic|exact|oracle)", name));
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kHeuristic:
      return "heuristic";
    case SolverKind::kExact:
      return "exact";
    case SolverKind::kOracle:
      return "oracle";
  }
  return "unknown";
}

Problem load_problem(const ProblemOptions& options) {
  Problem problem;
  if (options.model == kBuiltinTenBar) {
    problem.model = std::make_unique<TrussModel>(builtin_ten_bar(options.area));
    problem.builtin = true;
  } else {
    problem.model = std::make_unique<TrussModel>(load_truss_file(options.model));
  }
  problem.dataset = std::make_unique<MaterialDataset>(load_csv(options.data));
  if (options.c) {
    if (!(*options.c > 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, fmt::format("--c must be positive, got {}", *options.c));
    }
    problem.weighting.c = *options.c;
  } else {
    problem.weighting = compute_c(*problem.dataset);
  }
  return problem;
}

std::size_t parse_monitor_dof(const std::string& text, const TrussModel& model) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    std::size_t pos = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(text, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != text.size() || text.empty()) {
      throw Error(ErrorKind::kInvalidArgument, fmt::format("bad monitor DOF '{}'", text));
    }
    if (value >= model.num_dofs()) {
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("monitor DOF {} out of range (model has {} free DOFs)", value, model.num_dofs()));
    }
    return value;
  }
  const std::string node_text = text.substr(0, colon);
  const std::string axis_text = text.substr(colon + 1);
  int axis = -1;
  if (axis_text == "x" || axis_text == "0") axis = 0;
  if (axis_text == "y" || axis_text == "1") axis = 1;
  if (axis_text == "z" || axis_text == "2") axis = 2;
  std::size_t node = 0;
  try {
    node = std::stoul(node_text);
  } catch (const std::exception&) {
    axis = -1;
  }
  if (axis < 0) {
    throw Error(ErrorKind::kInvalidArgument, fmt::format("bad monitor DOF '{}' (use K or node:axis)", text));
  }
  const auto dof = model.dof_index(node, axis);
  if (!dof) {
    throw Error(ErrorKind::kInvalidArgument, fmt::format("monitor DOF {} is fixed or does not exist", text));
  }
  return *dof;
}

std::vector<double> parse_lambda_list(const std::string& text) {
  const auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::kInvalidArgument, fmt::format("bad load multiplier '{}' in '{}'", s, text));
    }
    return v;
  };

  std::vector<double> out;
  if (std::count(text.begin(), text.end(), ':') == 2) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    const double start = number(text.substr(0, a));
    const double step = number(text.substr(a + 1, b - a - 1));
    const double stop = number(text.substr(b + 1));
    if (!(step > 0.0) || stop < start) {
      throw Error(ErrorKind::kInvalidArgument, fmt::format("bad range '{}' (start:step:stop, step > 0)", text));
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
      out.push_back(start + static_cast<double>(k) * step);
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(number(item));
  }
  if (out.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "load multiplier list is empty");
  }
  return out;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::kInvalidArgument, fmt::format("cannot write {}", path.string()));
  }
  return out;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void write_phase_space(const MechanicalState& state, std::ostream& out) {
  out << "member,eps,sig,e_assigned,s_assigned\n";
  for (Eigen::Index i = 0; i < state.strain.size(); ++i) {
    out << fmt::format("{},{},{},{},{}\n", i, state.strain[i], state.stress[i], state.data_strain[i],
                       state.data_stress[i]);
  }
}

ExactOptions exact_options(const SolverSettings& s) {
  ExactOptions o;
  o.gap_tol = s.gap_tol;
  o.time_limit_s = s.time_limit_s;
  o.node_limit = s.node_limit;
  o.bound = s.bound;
  o.heuristic.max_iterations = s.heuristic_cap;
  return o;
}

constexpr double kMilliJoule = 1e3;

}  // namespace

AnalyzeResult cmd_analyze(const AnalyzeOptions& options, std::ostream& log) {
  const Problem problem = load_problem(options.problem);
  const TrussModel& model = *problem.model;
  const double c = problem.weighting.c;
  if (problem.weighting.skipped_zero_strain > 0) {
    log << fmt::format("note: {} zero-strain data point(s) skipped when computing c\n",
                       problem.weighting.skipped_zero_strain);
  }
  const StateSolver solver(model, *problem.dataset, c);
  const Eigen::VectorXd load = load_vector(model, options.lambda);

  nlohmann::ordered_json doc;
  doc["solver"] = to_string(options.solver);
  doc["lambda"] = options.lambda;
  doc["c_Pa"] = c;
  doc["c_skipped_zero_strain"] = problem.weighting.skipped_zero_strain;
  doc["members"] = model.num_members();
  doc["dofs"] = model.num_dofs();
  doc["data_points"] = problem.dataset->size();

  AnalyzeResult result;
  MechanicalState state;
  Assignment assignment;
  if (options.solver == SolverKind::kHeuristic) {
    HeuristicOptions ho;
    ho.max_iterations = options.settings.heuristic_cap;
    HeuristicReport h = solve_heuristic(solver, load, ho);
    result.status = h.converged ? "Converged" : "NotConverged";
    result.exit_code = h.converged ? kExitOk : kExitSolverLimit;
    doc["status"] = result.status;
    doc["iterations"] = h.iterations;
    state = std::move(h.state);
    assignment = std::move(h.assignment);
  } else {
    ExactReport r = options.solver == SolverKind::kExact
                        ? solve_exact(solver, load, exact_options(options.settings))
                        : brute_force(solver, load, options.settings.enumeration_limit);
    result.status = std::string(to_string(r.status));
    result.exit_code = r.status == SolveStatus::kOptimal ? kExitOk : kExitSolverLimit;
    doc["status"] = result.status;
    doc["nodes_explored"] = r.nodes_explored;
    doc["gap"] = r.gap;
    doc["best_bound_J"] = r.best_bound;
    if (options.solver == SolverKind::kExact) {
      doc["bound"] = to_string(options.settings.bound);
    }
    if (options.settings.timing) {
      doc["time_s"] = r.wall_time_s;
    }
    state = std::move(r.state);
    assignment = std::move(r.assignment);
  }
  result.objective = state.objective;
  doc["objective_J"] = state.objective;
  doc["equilibrium_residual_N"] = equilibrium_residual(state, model, load);
  doc["assignment"] = assignment.index;
  doc["u"] = to_vector(state.displacement);
  doc["strain"] = to_vector(state.strain);
  doc["stress"] = to_vector(state.stress);
  doc["data_strain"] = to_vector(state.data_strain);
  doc["data_stress"] = to_vector(state.data_stress);

  result.solution_path = options.out_dir / "solution.json";
  result.phase_space_path = options.out_dir / "phase_space.csv";
  {
    std::ofstream out = open_output(result.solution_path);
    out << doc.dump(2) << '\n';
  }
  {
    std::ofstream out = open_output(result.phase_space_path);
    write_phase_space(state, out);
  }
  log << fmt::format("{} solver: status {}, objective {:.6f} mJ\n", to_string(options.solver), result.status,
                     state.objective * kMilliJoule);
  return result;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, bool timing, std::ostream& out) {
  out << kSweepHeader << '\n';
  for (const SweepRow& r : rows) {
    out << fmt::format("{},", r.lambda);
    out << (r.opt_mj ? fmt::format("{:.6f}", *r.opt_mj) : "") << ',';
    out << (r.time_s && timing ? fmt::format("{:.3f}", *r.time_s) : "") << ',';
    out << (r.bnb_nodes ? fmt::format("{}", *r.bnb_nodes) : "") << ',';
    out << (r.heur_obj_mj ? fmt::format("{:.6f}", *r.heur_obj_mj) : "") << ',';
    out << (r.heur_iters ? fmt::format("{}", *r.heur_iters) : "") << ',';
    out << (r.heur_converged ? (*r.heur_converged ? "true" : "false") : "") << ',';
    out << (r.monitor_disp_m ? fmt::format("{:.9e}", *r.monitor_disp_m) : "") << ',';
    out << r.status << '\n';
  }
}

void print_sweep_table(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << fmt::format("{:>7} | {:>14} {:>9} {:>10} | {:>14} {:>9} | {:>14}\n", "lambda", "Opt. (1e-3 J)", "Time (s)",
                     "#BnB-node", "Obj. (1e-3 J)", "#iter.", "monitor (m)");
  out << std::string(94, '-') << '\n';
  for (const SweepRow& r : rows) {
    const std::string iters =
        r.heur_iters ? (r.heur_converged.value_or(false) ? fmt::format("{}", *r.heur_iters)
                                                          : fmt::format("(>{})", *r.heur_iters))
                     : "";
    const std::string heur = r.heur_obj_mj ? fmt::format("{:.3f}", *r.heur_obj_mj) : (r.heur_iters ? "---" : "");
    out << fmt::format("{:>7.1f} | {:>14} {:>9} {:>10} | {:>14} {:>9} | {:>14}  {}\n", r.lambda,
                       r.opt_mj ? fmt::format("{:.3f}", *r.opt_mj) : "",
                       r.time_s ? fmt::format("{:.1f}", *r.time_s) : "",
                       r.bnb_nodes ? fmt::format("{}", *r.bnb_nodes) : "", heur, iters,
                       r.monitor_disp_m ? fmt::format("{:.4e}", *r.monitor_disp_m) : "", r.status);
  }
}

SweepResult cmd_sweep(const SweepOptions& options, std::ostream& log) {
  if (options.lambdas.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "sweep needs at least one load multiplier");
  }
  const bool run_heuristic =
      std::find(options.solvers.begin(), options.solvers.end(), SolverKind::kHeuristic) != options.solvers.end();
  const bool run_exact =
      std::find(options.solvers.begin(), options.solvers.end(), SolverKind::kExact) != options.solvers.end();
  const bool run_oracle =
      std::find(options.solvers.begin(), options.solvers.end(), SolverKind::kOracle) != options.solvers.end();
  if (run_exact && run_oracle) {
    throw Error(ErrorKind::kInvalidArgument, "choose either exact or oracle for the Opt. column, not both");
  }
  if (!run_heuristic && !run_exact && !run_oracle) {
    throw Error(ErrorKind::kInvalidArgument, "no solver selected");
  }

  const Problem problem = load_problem(options.problem);
  const TrussModel& model = *problem.model;
  if (problem.weighting.skipped_zero_strain > 0) {
    log << fmt::format("note: {} zero-strain data point(s) skipped when computing c\n",
                       problem.weighting.skipped_zero_strain);
  }
  log << fmt::format("c = {:.6g} Pa, m = {}, n = {}, d = {}\n", problem.weighting.c, model.num_members(),
                     model.num_dofs(), problem.dataset->size());
  std::size_t monitor = 0;
  if (options.monitor_dof) {
    monitor = parse_monitor_dof(*options.monitor_dof, model);
  } else if (problem.builtin) {
    monitor = kTenBarMonitorDof;
  }
  const StateSolver solver(model, *problem.dataset, problem.weighting.c);

  SweepResult result;
  for (double lambda : options.lambdas) {
    SweepRow row;
    row.lambda = lambda;
    const Eigen::VectorXd load = load_vector(model, lambda);
    try {
      std::optional<MechanicalState> path_state;
      if (run_heuristic) {
        HeuristicOptions ho;
        ho.max_iterations = options.settings.heuristic_cap;
        HeuristicReport h = solve_heuristic(solver, load, ho);
        row.heur_iters = h.iterations;
        row.heur_converged = h.converged;
        if (h.converged) {
          row.heur_obj_mj = h.state.objective * kMilliJoule;
        }
        row.status = h.converged ? "Converged" : "NotConverged";
        path_state = std::move(h.state);
      }
      if (run_exact || run_oracle) {
        ExactReport r = run_exact ? solve_exact(solver, load, exact_options(options.settings))
                                  : brute_force(solver, load, options.settings.enumeration_limit);
        row.opt_mj = r.objective * kMilliJoule;
        row.time_s = r.wall_time_s;
        row.bnb_nodes = r.nodes_explored;
        row.status = std::string(to_string(r.status));
        if (r.status != SolveStatus::kOptimal) {
          result.exit_code = std::max(result.exit_code, static_cast<int>(kExitSolverLimit));
        }
        path_state = std::move(r.state);
      }
      if (path_state && path_state->displacement.size() > 0) {
        row.monitor_disp_m = path_state->displacement[static_cast<Eigen::Index>(monitor)];
      }
    } catch (const Error& e) {
      row.status = fmt::format("Error:{}", to_string(e.kind()));
      result.exit_code = std::max(result.exit_code, exit_code_for(e.kind()));
      log << fmt::format("lambda {}: {}\n", lambda, e.what());
    }
    result.rows.push_back(std::move(row));
  }

  result.sweep_path = options.out_dir / "sweep.csv";
  result.path_path = options.out_dir / "path.csv";
  {
    std::ofstream out = open_output(result.sweep_path);
    write_sweep_csv(result.rows, options.settings.timing, out);
  }
  {
    std::ofstream out = open_output(result.path_path);
    out << "lambda,monitor_disp_m\n";
    for (const SweepRow& r : result.rows) {
      if (r.monitor_disp_m) {
        out << fmt::format("{},{:.9e}\n", r.lambda, *r.monitor_disp_m);
      }
    }
  }
  print_sweep_table(result.rows, log);
  return result;
}

void cmd_gen_data(const GenDataOptions& options, std::ostream& log) {
  const MaterialDataset data = generate_synthetic(options.synthetic);
  std::ofstream out = open_output(options.out);
  write_csv(data, out);
  log << fmt::format("wrote {} points ({}) to {}\n", data.size(), to_string(options.synthetic.curve),
                     options.out.string());
}

}  // namespace ddtruss::cli
