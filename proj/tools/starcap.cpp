// starcap: command-line driver for the capacitary-potential experiments.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "starcap/config.hpp"
#include "starcap/experiment.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::string grid;
  std::optional<double> q;
  std::optional<double> tol;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "experiment config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory (overrides [output] dir)");
  cmd->add_option("--grid", o.grid, "grid size MxK (angular x radial)");
  cmd->add_option("--q", o.q, "exponent q >= 2");
  cmd->add_option("--tol", o.tol, "verdict / condition tolerance");
}

starcap::ExperimentConfig load(const Overrides& o) {
  starcap::ExperimentConfig cfg = starcap::load_experiment(o.config);
  if (!o.grid.empty()) std::tie(cfg.m, cfg.k) = starcap::parse_grid(o.grid);
  if (o.q) cfg.solver.q = *o.q;
  if (o.tol) {
    cfg.analysis.tol = *o.tol;
    cfg.analysis.condition_tol = *o.tol;
  }
  if (!o.out.empty()) cfg.output_dir = o.out;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacitary potentials of starshaped rings and starshapedness checks"};
  app.require_subcommand(1);
  Overrides o;
  auto* solve = app.add_subcommand("solve", "solve the boundary value problem and dump the field");
  auto* verify = app.add_subcommand("verify", "solve and test every superlevel set for starshapedness");
  auto* oracle = app.add_subcommand("oracle", "compare against the radial quadrature oracle (round rings)");
  auto* condition = app.add_subcommand("check-condition", "sample the scaling condition on the right-hand side");
  auto* sweep = app.add_subcommand("sweep", "run verify over the [sweep] parameter grid");
  for (auto* cmd : {solve, verify, oracle, condition, sweep}) add_common(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : starcap::kExitInvalid;
  }

  starcap::ExperimentConfig cfg;
  try {
    cfg = load(o);
  } catch (const std::exception& e) {
    std::cerr << "starcap: invalid input: " << e.what() << '\n';
    return starcap::kExitInvalid;
  }

  try {
    starcap::CommandOutcome outcome;
    if (solve->parsed()) outcome = starcap::cmd_solve(cfg, cfg.output_dir);
    else if (verify->parsed()) outcome = starcap::cmd_verify(cfg, cfg.output_dir);
    else if (oracle->parsed()) outcome = starcap::cmd_oracle(cfg, cfg.output_dir);
    else if (condition->parsed()) outcome = starcap::cmd_check_condition(cfg, cfg.output_dir);
    else outcome = starcap::cmd_sweep(cfg, cfg.output_dir, starcap::sweep_threads_from_env());
    (outcome.exit_code == starcap::kExitInvalid ? std::cerr : std::cout) << outcome.message << '\n';
    for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << '\n';
    return outcome.exit_code;
  } catch (const starcap::ConfigError& e) {
    std::cerr << "starcap: invalid input: " << e.what() << '\n';
    return starcap::kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "starcap: numerical failure: " << e.what() << '\n';
    return starcap::kExitNumerical;
  }
}
