#include "starcap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "starcap/field_io.hpp"
#include "starcap/oracle.hpp"

namespace starcap {
namespace {

constexpr const char* kVersion = "0.1.0";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& command, const ExperimentConfig& cfg,
                    const CommandOutcome& outcome) {
  auto out = open_output(out_dir / (command + "_manifest.txt"));
  out << "command " << command << "\n";
  out << "version starcap " << kVersion << "\n";
  out << "config_hash " << hex64(fnv1a(cfg.source)) << "\n";
  out << "name " << cfg.name << "\n";
  out << "seed " << cfg.seed << "\n";
  out << "effective_q " << format_number(cfg.solver.q) << "\n";
  out << "effective_grid " << cfg.m << 'x' << cfg.k << "\n";
  out << "effective_tol " << (cfg.analysis.tol ? format_number(*cfg.analysis.tol) : std::string("auto")) << "\n";
  out << "exit_code " << outcome.exit_code << "\n";
  for (const auto& f : outcome.files) out << "output " << f.filename().string() << "\n";
}

std::string common_header() {
  return "experiment,factor,ring_hash,q,m,k,rhs,epsilon,picard_tol,linear_tol";
}

std::string common_fields(const ExperimentConfig& cfg, const std::string& ring_hash) {
  std::ostringstream out;
  out << cfg.name << ',' << cfg.factor.label() << ',' << ring_hash << ',' << format_number(cfg.solver.q) << ','
      << cfg.m << ',' << cfg.k << ',' << cfg.rhs.label() << ',' << format_number(cfg.solver.epsilon) << ','
      << format_number(cfg.solver.picard_tol) << ',' << format_number(cfg.solver.linear_tol);
  return out.str();
}

int angular_coarsening(int m) { return (m % 2 == 0 && m / 2 >= 8) ? m / 2 : 0; }

}  // namespace

SolveResult run_solve(const ExperimentConfig& cfg) {
  const RingGrid grid = build_grid(cfg.ring(), cfg.m, cfg.k);
  const RhsSpec rhs = cfg.rhs.build();
  if (cfg.solver.q == 2.0 && !rhs.uses_gradient()) return solve_linear(grid, rhs, cfg.solver, cfg.bc);
  return solve_qlaplace(grid, rhs, cfg.solver, cfg.bc);
}

double auto_tolerance(double refinement_error) { return std::max(10.0 * refinement_error, 1e-6); }

VerifyResult run_verify(const ExperimentConfig& cfg) {
  const bool diagnostic = cfg.analysis.diagnostic == "offcenter_bump";
  const RingGrid grid = build_grid(cfg.ring(), cfg.m, cfg.k);
  VerifyResult result{std::nullopt, ScalarField(grid, std::vector<double>(grid.size()), cfg.solver.q), {}, 0.0, {}, false};
  if (diagnostic) {
    result.field = offcenter_bump(grid);
  } else {
    result.solve = run_solve(cfg);
    result.field = result.solve->field;
    if (!cfg.analysis.tol) {
      if (const int mc = angular_coarsening(cfg.m); mc > 0 && cfg.k >= 7) {
        ExperimentConfig coarse = cfg;
        coarse.m = mc;
        coarse.k = (cfg.k + 1) / 2;
        result.refinement_error = refinement_error(run_solve(coarse).field, result.field);
      }
    }
  }
  const double tol = cfg.analysis.tol.value_or(auto_tolerance(result.refinement_error));
  result.report = starshape_report(result.field, tol);
  bool levels_ok = true;
  for (double level : cfg.analysis.levels) {
    LevelResult lr;
    lr.level = level;
    try {
      const SuperlevelBoundary boundary = superlevel_boundary(result.field, level);
      lr.found = true;
      lr.unique_crossing = boundary.unique_crossing;
      lr.star_defect = star_defect(boundary.radius, {0.0, 0.0}, 4 * cfg.m);
      levels_ok = levels_ok && lr.unique_crossing && lr.star_defect >= -tol;
    } catch (const std::exception& e) {
      lr.error = e.what();
      levels_ok = false;
    }
    result.levels.push_back(lr);
  }
  const bool converged = !result.solve || result.solve->converged;
  result.verdict = result.report.verdict && levels_ok && converged;
  return result;
}

CommandOutcome cmd_solve(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  CommandOutcome outcome;
  std::filesystem::create_directories(out_dir);
  const auto start = std::chrono::steady_clock::now();
  const SolveResult result = run_solve(cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto dump_path = out_dir / "field.txt";
  {
    auto out = open_output(dump_path);
    write_field_dump(out, result.field);
  }
  const auto log_path = out_dir / "solve_log.txt";
  {
    auto out = open_output(log_path);
    out << "converged " << (result.converged ? "true" : "false") << "\n";
    out << "iterations " << result.iterations << "\n";
    out << "final_update " << format_number(result.final_update) << "\n";
    out << "wall_time_seconds " << format_number(seconds) << "\n";
    for (std::size_t it = 0; it < result.update_history.size(); ++it) {
      out << "update " << it + 1 << ' ' << format_number(result.update_history[it]) << "\n";
    }
  }
  outcome.files = {dump_path, log_path};
  outcome.exit_code = result.converged ? kExitOk : kExitNumerical;
  outcome.message = result.converged ? "converged in " + std::to_string(result.iterations) + " iteration(s)"
                                     : "NOT converged after " + std::to_string(result.iterations) +
                                           " iterations (final update " + format_number(result.final_update) + ")";
  write_manifest(out_dir, "solve", cfg, outcome);
  return outcome;
}

CommandOutcome cmd_verify(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  CommandOutcome outcome;
  std::filesystem::create_directories(out_dir);
  const VerifyResult result = run_verify(cfg);
  const StarshapedRing ring = cfg.ring();
  const auto path = out_dir / "verify.csv";
  {
    auto out = open_output(path);
    out << common_header()
        << ",diagnostic,tol,refinement_error,converged,iterations,envelope_defect,monotonicity_defect,normal_defect,"
           "level,level_found,unique_crossing,level_star_defect,verdict\n";
    const std::string prefix = common_fields(cfg, ring.hash());
    for (const LevelResult& lr : result.levels) {
      out << prefix << ',' << cfg.analysis.diagnostic << ',' << format_number(result.report.tolerance) << ','
          << format_number(result.refinement_error) << ','
          << (result.solve ? (result.solve->converged ? "true" : "false") : "n/a") << ','
          << (result.solve ? result.solve->iterations : 0) << ',' << format_number(result.report.envelope_defect)
          << ',' << format_number(result.report.monotonicity_defect) << ','
          << format_number(result.report.normal_defect) << ',' << format_number(lr.level) << ','
          << (lr.found ? "true" : "false") << ',' << (lr.unique_crossing ? "true" : "false") << ','
          << (lr.found ? format_number(lr.star_defect) : "nan") << ',' << (result.verdict ? "true" : "false")
          << '\n';
    }
  }
  outcome.files = {path};
  outcome.exit_code = result.verdict ? kExitOk : kExitNumerical;
  outcome.message = std::string("verdict ") + (result.verdict ? "true" : "false") +
                    " (envelope " + format_number(result.report.envelope_defect) + ", monotonicity " +
                    format_number(result.report.monotonicity_defect) + ", normal " +
                    format_number(result.report.normal_defect) + ", tol " + format_number(result.report.tolerance) +
                    ")";
  write_manifest(out_dir, "verify", cfg, outcome);
  return outcome;
}

CommandOutcome cmd_oracle(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  CommandOutcome outcome;
  const StarshapedRing ring = cfg.ring();
  if (!ring.is_round()) {
    outcome.exit_code = kExitInvalid;
    outcome.message = "oracle needs a round ring (constant inner and outer radius)";
    return outcome;
  }
  std::filesystem::create_directories(out_dir);
  const double r1 = ring.inner().samples()[0];
  const double r0 = ring.outer().samples()[0];
  const RadialPotential pot(ring.factor(), cfg.solver.n, cfg.solver.q, r1, r0);
  const auto table_path = out_dir / "oracle_table.csv";
  {
    auto out = open_output(table_path);
    out << "r,U\n";
    const int n = cfg.analysis.oracle_points;
    for (int p = 0; p < n; ++p) {
      const double r = p == n - 1 ? r0 : r1 + (r0 - r1) * p / (n - 1);
      out << format_number(r) << ',' << format_number(pot(r)) << '\n';
    }
  }
  const SolveResult solved = run_solve(cfg);
  const double error = compare_round(solved.field, pot);
  const auto cmp_path = out_dir / "oracle_compare.csv";
  {
    auto out = open_output(cmp_path);
    out << common_header() << ",R1,R0,converged,iterations,max_error\n";
    out << common_fields(cfg, ring.hash()) << ',' << format_number(r1) << ',' << format_number(r0) << ','
        << (solved.converged ? "true" : "false") << ',' << solved.iterations << ',' << format_number(error) << '\n';
  }
  outcome.files = {table_path, cmp_path};
  outcome.exit_code = solved.converged ? kExitOk : kExitNumerical;
  outcome.message = "max |U - U_oracle| = " + format_number(error);
  write_manifest(out_dir, "oracle", cfg, outcome);
  return outcome;
}

CommandOutcome cmd_check_condition(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  CommandOutcome outcome;
  if (!cfg.has_rhs_section) {
    outcome.exit_code = kExitInvalid;
    outcome.message = "check-condition needs an [rhs] section";
    return outcome;
  }
  std::filesystem::create_directories(out_dir);
  const StarshapedRing ring = cfg.ring();
  ConditionSamples samples = cfg.analysis.condition;
  std::mt19937_64 rng(cfg.seed);
  samples.angle_offset = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const ConditionMargin margin = condition_margin(cfg.rhs.build(), ring.factor(), cfg.solver.q, ring, samples);
  const double tol = cfg.analysis.condition_tol;
  const bool holds = margin.margin >= -tol;
  const auto path = out_dir / "condition.csv";
  {
    auto out = open_output(path);
    out << common_header() << ",margin,s_monotonicity,argmin_x1,argmin_x2,argmin_tau,argmin_s,argmin_v1,argmin_v2,"
                              "tol,holds\n";
    out << common_fields(cfg, ring.hash()) << ',' << format_number(margin.margin) << ','
        << format_number(margin.s_monotonicity) << ',' << format_number(margin.x.x) << ','
        << format_number(margin.x.y) << ',' << format_number(margin.tau) << ',' << format_number(margin.s) << ','
        << format_number(margin.v.x) << ',' << format_number(margin.v.y) << ',' << format_number(tol) << ','
        << (holds ? "true" : "false") << '\n';
  }
  outcome.files = {path};
  outcome.exit_code = holds ? kExitOk : kExitNumerical;
  outcome.message = "condition margin " + format_number(margin.margin) + (holds ? " (holds)" : " (fails)") +
                    ", s-monotonicity " + format_number(margin.s_monotonicity);
  write_manifest(out_dir, "check-condition", cfg, outcome);
  return outcome;
}

CommandOutcome cmd_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, unsigned threads) {
  CommandOutcome outcome;
  if (cfg.sweep.empty()) {
    outcome.exit_code = kExitInvalid;
    outcome.message = "empty sweep: give at least one of sweep.q, sweep.factors, sweep.grids";
    return outcome;
  }
  const std::vector<double> qs = cfg.sweep.q.empty() ? std::vector<double>{cfg.solver.q} : cfg.sweep.q;
  const std::vector<FactorSpec> factors = cfg.sweep.factors.empty() ? std::vector<FactorSpec>{cfg.factor} : cfg.sweep.factors;
  const std::vector<std::pair<int, int>> grids =
      cfg.sweep.grids.empty() ? std::vector<std::pair<int, int>>{{cfg.m, cfg.k}} : cfg.sweep.grids;

  std::vector<ExperimentConfig> runs;
  for (double q : qs)
    for (const FactorSpec& f : factors)
      for (const auto& [m, k] : grids) {
        ExperimentConfig run = cfg;
        run.solver.q = q;
        run.factor = f;
        run.m = m;
        run.k = k;
        runs.push_back(std::move(run));
      }

  std::vector<std::string> rows(runs.size());
  std::vector<char> passed(runs.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next.fetch_add(1); idx < runs.size(); idx = next.fetch_add(1)) {
      const ExperimentConfig& run = runs[idx];
      std::ostringstream row;
      row << idx << ',';
      std::string hash;
      try {
        hash = run.ring().hash();
      } catch (const std::exception&) {
      }
      row << common_fields(run, hash) << ',';
      try {
        run.validate();
        const VerifyResult r = run_verify(run);
        row << format_number(r.report.tolerance) << ','
            << format_number(r.refinement_error) << ',' << (r.solve && r.solve->converged ? "true" : "false") << ','
            << (r.solve ? r.solve->iterations : 0) << ',' << format_number(r.report.envelope_defect) << ','
            << format_number(r.report.monotonicity_defect) << ',' << format_number(r.report.normal_defect) << ','
            << (r.verdict ? "true" : "false") << ',';
        passed[idx] = r.verdict ? 1 : 0;
      } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), ',', ';');
        row << ",,,,,,,false," << msg;
      }
      rows[idx] = row.str();
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(runs.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }

  std::filesystem::create_directories(out_dir);
  const auto path = out_dir / "sweep.csv";
  {
    auto out = open_output(path);
    out << "index," << common_header() << ",tol,refinement_error,converged,iterations,envelope_defect,"
           "monotonicity_defect,normal_defect,verdict,error\n";
    for (const auto& row : rows) out << row << '\n';
  }
  const auto failures = std::count(passed.begin(), passed.end(), 0);
  outcome.files = {path};
  outcome.exit_code = failures == 0 ? kExitOk : kExitNumerical;
  outcome.message = std::to_string(runs.size() - static_cast<std::size_t>(failures)) + "/" +
                    std::to_string(runs.size()) + " runs with verdict true";
  write_manifest(out_dir, "sweep", cfg, outcome);
  return outcome;
}

unsigned sweep_threads_from_env() {
  if (const char* env = std::getenv("STARCAP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace starcap
