#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"

namespace {

using namespace ddtruss;
using namespace ddtruss::cli;

void add_problem_flags(CLI::App& cmd, ProblemOptions& problem) {
  cmd.add_option("--model", problem.model, "Truss JSON file, or builtin:ten-bar")->capture_default_str();
  cmd.add_option("--data", problem.data, "Material data CSV (strain [-], stress [Pa])")->required();
  cmd.add_option("--area", problem.area, "Member area for the builtin model [m^2]")->capture_default_str();
  cmd.add_option("--c", problem.c, "Weighting constant c [Pa]; default is the mean stress/strain ratio");
}

void add_solver_flags(CLI::App& cmd, SolverSettings& s, std::string& bound) {
  cmd.add_option("--gap-tol", s.gap_tol, "Relative MIP gap tolerance [-]")->capture_default_str();
  cmd.add_option("--time-limit", s.time_limit_s, "Branch-and-bound time limit [s]");
  cmd.add_option("--node-limit", s.node_limit, "Branch-and-bound node limit")->capture_default_str();
  cmd.add_option("--bound", bound, "Node bound: hull or drop-free")->capture_default_str();
  cmd.add_option("--heuristic-cap", s.heuristic_cap, "Fixed-point iteration cap")->capture_default_str();
  cmd.add_option("--enumeration-limit", s.enumeration_limit, "Oracle limit on d^m")->capture_default_str();
  cmd.add_flag("--no-timing", [&s](std::int64_t) { s.timing = false; },
               "Leave wall-clock times out of output files (byte-identical reruns)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-driven truss elasticity: exact branch-and-bound, fixed-point heuristic, brute-force oracle"};
  app.require_subcommand(1);

  AnalyzeOptions analyze;
  std::string analyze_solver = "exact";
  std::string analyze_bound = "hull";
  auto* analyze_cmd = app.add_subcommand("analyze", "Solve one load case; write solution.json and phase_space.csv");
  add_problem_flags(*analyze_cmd, analyze.problem);
  add_solver_flags(*analyze_cmd, analyze.settings, analyze_bound);
  analyze_cmd->add_option("--lambda", analyze.lambda, "Load multiplier [-]")->capture_default_str();
  analyze_cmd->add_option("--solver", analyze_solver, "heuristic, exact or oracle")->capture_default_str();
  analyze_cmd->add_option("--out-dir", analyze.out_dir, "Output directory")->capture_default_str();

  SweepOptions sweep;
  std::string sweep_lambdas = "0:1:11";
  std::string sweep_solvers = "heuristic,exact";
  std::string sweep_bound = "hull";
  std::string monitor;
  auto* sweep_cmd = app.add_subcommand("sweep", "Load-multiplier sweep; write sweep.csv and path.csv");
  add_problem_flags(*sweep_cmd, sweep.problem);
  add_solver_flags(*sweep_cmd, sweep.settings, sweep_bound);
  sweep_cmd->add_option("--lambda-list", sweep_lambdas, "start:step:stop or comma list [-]")->capture_default_str();
  sweep_cmd->add_option("--solvers", sweep_solvers, "Comma list of heuristic, exact, oracle")->capture_default_str();
  sweep_cmd->add_option("--monitor-dof", monitor,
                        "Monitored displacement: free-DOF index or node:axis (default 2:y for builtin:ten-bar)");
  sweep_cmd->add_option("--out-dir", sweep.out_dir, "Output directory")->capture_default_str();

  GenDataOptions gen;
  std::string curve = "cubic_softening:E=2e9,beta=4.6e12";
  bool evenly = false;
  auto* gen_cmd = app.add_subcommand("gen-data", "Write a synthetic material data CSV");
  gen_cmd->add_option("--curve", curve, "linear:E=<Pa> or cubic_softening:E=<Pa>,beta=<Pa>")->capture_default_str();
  gen_cmd->add_option("--d", gen.synthetic.count, "Number of points")->capture_default_str();
  gen_cmd->add_option("--noise", gen.synthetic.noise_std, "Stress noise standard deviation [Pa]")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.synthetic.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--strain-min", gen.synthetic.strain_min, "Lower strain bound [-]")->capture_default_str();
  gen_cmd->add_option("--strain-max", gen.synthetic.strain_max, "Upper strain bound [-]")->capture_default_str();
  gen_cmd->add_flag("--evenly-spaced", evenly, "Evenly spaced strains instead of uniform random");
  gen_cmd->add_option("--out", gen.out, "Output CSV path")->required();

  double ten_bar_area = 1.0e-3;
  std::string ten_bar_out;
  auto* ten_bar_cmd = app.add_subcommand("ten-bar", "Write the builtin 10-bar truss as a JSON model file");
  ten_bar_cmd->add_option("--area", ten_bar_area, "Member area [m^2]")->capture_default_str();
  ten_bar_cmd->add_option("--out", ten_bar_out, "Output JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*analyze_cmd) {
      analyze.solver = parse_solver(analyze_solver);
      analyze.settings.bound = parse_bound_strategy(analyze_bound);
      return cmd_analyze(analyze, std::cout).exit_code;
    }
    if (*sweep_cmd) {
      sweep.lambdas = parse_lambda_list(sweep_lambdas);
      sweep.solvers.clear();
      std::stringstream ss(sweep_solvers);
      for (std::string item; std::getline(ss, item, ',');) {
        sweep.solvers.push_back(parse_solver(item));
      }
      sweep.settings.bound = parse_bound_strategy(sweep_bound);
      if (!monitor.empty()) sweep.monitor_dof = monitor;
      return cmd_sweep(sweep, std::cout).exit_code;
    }
    if (*gen_cmd) {
      gen.synthetic.curve = parse_curve_spec(curve);
      gen.synthetic.sampling = evenly ? StrainSampling::kEvenlySpaced : StrainSampling::kUniformRandom;
      cmd_gen_data(gen, std::cout);
      return kExitOk;
    }
    if (*ten_bar_cmd) {
      const TrussModel model = builtin_ten_bar(ten_bar_area);
      std::ofstream out(ten_bar_out, std::ios::binary);
      if (!out) {
        throw Error(ErrorKind::kInvalidArgument, fmt::format("cannot write {}", ten_bar_out));
      }
      write_truss(model, out);
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitNumericalError;
  }
  return kExitOk;
}
