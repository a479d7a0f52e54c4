#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ddtruss/dataset.hpp"
#include "ddtruss/error.hpp"
#include "ddtruss/miqp.hpp"
#include "ddtruss/truss_model.hpp"

namespace ddtruss::cli {

/// Exit codes of the ddtruss executable.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 2,
  kExitSolverLimit = 3,
  kExitNumericalError = 4,
};

/// Maps a library error onto an exit code.
int exit_code_for(ErrorKind kind);

inline constexpr const char* kBuiltinTenBar = "builtin:ten-bar";

enum class SolverKind { kHeuristic, kExact, kOracle };
SolverKind parse_solver(const std::string& name);
std::string_view to_string(SolverKind kind);

struct ProblemOptions {
  std::string model = kBuiltinTenBar;  // truss JSON path or "builtin:ten-bar"
  std::filesystem::path data;
  double area = 1.0e-3;                // m², builtin model only
  std::optional<double> c;             // Pa; overrides the mean-ratio rule
};

struct SolverSettings {
  double gap_tol = 0.0;
  std::optional<double> time_limit_s;
  std::size_t node_limit = 10'000'000;
  BoundStrategy bound = BoundStrategy::kConvexHull;
  std::size_t heuristic_cap = kDefaultHeuristicCap;
  std::size_t enumeration_limit = 1'000'000;
  /// Write wall-clock times into output files. Off gives byte-identical reruns.
  bool timing = true;
};

/// Loaded model, data and weighting constant. The model and data are held by
/// pointer so the StateSolver references stay valid when this is moved.
struct Problem {
  std::unique_ptr<TrussModel> model;
  std::unique_ptr<MaterialDataset> dataset;
  Weighting weighting;
  bool builtin = false;
};

Problem load_problem(const ProblemOptions& options);

/// Free-DOF index from "K" or "node:axis" (axis x/y/z or 0/1/2).
std::size_t parse_monitor_dof(const std::string& text, const TrussModel& model);

struct AnalyzeOptions {
  ProblemOptions problem;
  double lambda = 0.0;
  SolverKind solver = SolverKind::kExact;
  SolverSettings settings;
  std::filesystem::path out_dir = ".";
};

struct AnalyzeResult {
  std::string status;  // Optimal / GapReached / ... / Converged / NotConverged
  double objective = 0.0;
  std::filesystem::path solution_path;
  std::filesystem::path phase_space_path;
  int exit_code = kExitOk;
};

/// Writes solution.json and phase_space.csv into out_dir.
AnalyzeResult cmd_analyze(const AnalyzeOptions& options, std::ostream& log);

struct SweepOptions {
  ProblemOptions problem;
  std::vector<double> lambdas;
  std::vector<SolverKind> solvers = {SolverKind::kHeuristic, SolverKind::kExact};
  SolverSettings settings;
  std::optional<std::string> monitor_dof;
  std::filesystem::path out_dir = ".";
};

struct SweepRow {
  double lambda = 0.0;
  std::optional<double> opt_mj;
  std::optional<double> time_s;
  std::optional<std::size_t> bnb_nodes;
  std::optional<double> heur_obj_mj;  // empty when the heuristic did not converge
  std::optional<std::size_t> heur_iters;
  std::optional<bool> heur_converged;
  std::optional<double> monitor_disp_m;
  std::string status;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::filesystem::path sweep_path;
  std::filesystem::path path_path;
  int exit_code = kExitOk;
};

/// Writes sweep.csv and path.csv into out_dir.
SweepResult cmd_sweep(const SweepOptions& options, std::ostream& log);

inline constexpr const char* kSweepHeader =
    "lambda,opt_mJ,time_s,bnb_nodes,heur_obj_mJ,heur_iters,heur_converged,monitor_disp_m,status";

void write_sweep_csv(const std::vector<SweepRow>& rows, bool timing, std::ostream& out);
/// Table-1 style text rendering of a sweep.
void print_sweep_table(const std::vector<SweepRow>& rows, std::ostream& out);

struct GenDataOptions {
  SyntheticOptions synthetic;
  std::filesystem::path out;
};

void cmd_gen_data(const GenDataOptions& options, std::ostream& log);

/// "0:1:11" (start:step:stop, inclusive) or "0,1,2.5".
std::vector<double> parse_lambda_list(const std::string& text);

}  // namespace ddtruss::cli
