#pragma once

// Pipelines behind the command-line subcommands. Each cmd_* writes its files
// into `out_dir` and returns the process exit code:
//   0 success / verdict true, 1 invalid input, 2 non-convergence / verdict false.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "starcap/analysis.hpp"
#include "starcap/config.hpp"
#include "starcap/solver.hpp"

namespace starcap {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitNumerical = 2 };

struct CommandOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::filesystem::path> files;
};

/// Solve according to the config (q = 2 and gradient-free F take the linear path).
SolveResult run_solve(const ExperimentConfig& cfg);

struct LevelResult {
  double level = 0.0;
  bool found = false;
  bool unique_crossing = false;
  double star_defect = 0.0;
  std::string error;
};

struct VerifyResult {
  std::optional<SolveResult> solve;  // empty in diagnostic mode
  ScalarField field;
  StarshapeReport report;
  double refinement_error = 0.0;
  std::vector<LevelResult> levels;
  bool verdict = false;
};

/// Verdict tolerance: 10 x refinement error, floored at 1e-6.
double auto_tolerance(double refinement_error);

/// Solve (or inject the diagnostic field), envelope, report and superlevel boundaries.
VerifyResult run_verify(const ExperimentConfig& cfg);

CommandOutcome cmd_solve(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
CommandOutcome cmd_verify(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
CommandOutcome cmd_oracle(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
CommandOutcome cmd_check_condition(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
/// Runs verify over q x factors x grids; `threads` bounds concurrency.
CommandOutcome cmd_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, unsigned threads);

/// Thread budget from STARCAP_THREADS (defaults to hardware concurrency).
unsigned sweep_threads_from_env();

}  // namespace starcap
