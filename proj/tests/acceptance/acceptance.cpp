// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../support.hpp"
#include "starcap/analysis.hpp"
#include "starcap/config.hpp"
#include "starcap/experiment.hpp"
#include "starcap/oracle.hpp"

using namespace starcap;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void guarded(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

SolverConfig with_q(double q) {
  SolverConfig c;
  c.q = q;
  return c;
}

// worst deviation from `target` of U linearly interpolated at radius r along every ray of a round ring
double value_error_at(const ScalarField& f, double r, double target) {
  double worst = 0.0;
  const auto& g = f.grid;
  for (int j = 0; j < g.angular(); ++j)
    for (int i = 0; i + 1 < g.radial(); ++i) {
      const double a = g.node_radius(j, i), b = g.node_radius(j, i + 1);
      if (r >= a && r <= b) {
        const double u = f.at(j, i) + (f.at(j, i + 1) - f.at(j, i)) * (r - a) / (b - a);
        worst = std::max(worst, std::abs(u - target));
        break;
      }
    }
  return worst;
}

const char* kEllipse = R"(
[factor]
kind = euclidean
lambda = 1
[ring]
outer_cos = 1.5, 0, 0.3
inner_cos = 0.5, 0.1
)";

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const RingGrid g = build_grid(test::round_ring(1.0, 2.0), 128, 256);
  const SolveResult r = solve_linear(g, RhsSpec::zero(), SolverConfig{});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double err = compare_round(r.field, RadialPotential(RadialConformalFactor::euclidean(1.0), 2, 2.0, 1.0, 2.0));
  const double mid = value_error_at(r.field, std::sqrt(2.0), 0.5);
  report(1, r.converged && err <= 5e-3 && mid <= 5e-3 && secs <= 30.0,
         fmt("linear oracle: max err %.3e (<= 5e-3), |U(sqrt2) - 0.5| %.3e (<= 5e-3), %.2f s (<= 30 s)", err, mid,
             secs));
}

void criterion2() {
  const RingGrid g = build_grid(test::round_ring(1.0, 2.0), 128, 256);
  const SolveResult r = solve_qlaplace(g, RhsSpec::zero(), with_q(3.0));
  const double err = compare_round(r.field, RadialPotential(RadialConformalFactor::euclidean(1.0), 2, 3.0, 1.0, 2.0));
  report(2, r.converged && r.iterations <= 200 && err <= 1e-2,
         fmt("q=3 oracle: max err %.3e (<= 1e-2), Picard %s in %d iterations (<= 200)", err,
             r.converged ? "converged" : "NOT converged", r.iterations));
}

void criterion3() {
  std::string detail;
  bool ok = true;
  for (auto f : {RadialConformalFactor::sphere(1.0), RadialConformalFactor::hyperbolic(1.0)}) {
    const SolveResult r = solve_qlaplace(build_grid(test::round_ring(0.3, 0.8, f), 128, 256), RhsSpec::zero(),
                                         with_q(3.0));
    const double err = compare_round(r.field, RadialPotential(f, 2, 3.0, 0.3, 0.8));
    ok = ok && r.converged && err <= 1e-2;
    detail += fmt("%s max err %.3e; ", f.describe().c_str(), err);
  }
  report(3, ok, "curved factors q=3: " + detail + "(each <= 1e-2)");
}

std::vector<double> levels_star_defects;

void criterion4() {
  StarshapeReport rep[2];
  const int grids[2][2] = {{128, 256}, {256, 512}};
  for (int p = 0; p < 2; ++p) {
    const auto [m, k] = grids[p];
    const ScalarField u =
        solve_linear(build_grid(test::ellipse_ring(RadialConformalFactor::euclidean(1.0), 512), m, k), RhsSpec::zero(),
                     SolverConfig{})
            .field;
    rep[p] = starshape_report(u, 5e-3);
    if (p == 0) {
      for (int l = 1; l <= 9; ++l) {
        levels_star_defects.push_back(star_defect(superlevel_boundary(u, 0.1 * l).radius, {0, 0}, 1024));
      }
    }
  }
  const bool small = rep[0].envelope_defect <= 5e-3 && rep[0].monotonicity_defect <= 5e-3;
  const bool shrink = rep[1].envelope_defect <= 0.5 * rep[0].envelope_defect &&
                      rep[1].monotonicity_defect <= 0.5 * rep[0].monotonicity_defect;
  report(4, small && shrink,
         fmt("q=2 ellipse ring: envelope %.3e -> %.3e, monotonicity %.3e -> %.3e (<= 5e-3, halve on doubling)",
             rep[0].envelope_defect, rep[1].envelope_defect, rep[0].monotonicity_defect, rep[1].monotonicity_defect));
}

void criterion5() {
  ExperimentConfig cfg = parse_experiment(std::string("[run]\nname = theorem_sweep\n") + kEllipse +
                                          "[solver]\ngrid = 128x256\n[analysis]\ntol = auto\n"
                                          "[sweep]\nq = 2.5, 3, 4\nfactors = euclidean:1, sphere:1, hyperbolic:2\n");
  cfg.validate();
  const auto dir = std::filesystem::temp_directory_path() / "starcap_acceptance_sweep";
  std::filesystem::remove_all(dir);
  const CommandOutcome out = cmd_sweep(cfg, dir, sweep_threads_from_env());
  std::ifstream csv(dir / "sweep.csv");
  std::string line;
  std::getline(csv, line);
  int rows = 0, verdicts = 0;
  double worst_tol = 0.0;
  while (std::getline(csv, line)) {
    ++rows;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (cols.size() >= 19 && cols[18] == "true") ++verdicts;
    if (cols.size() >= 12 && !cols[11].empty()) worst_tol = std::max(worst_tol, std::stod(cols[11]));
  }
  report(5, out.exit_code == kExitOk && rows == 9 && verdicts == 9,
         fmt("q in {2.5,3,4} x {euclidean:1, sphere:1, hyperbolic:2}: %d/%d rows verdict true, refinement-tied tol <= "
             "%.3e",
             verdicts, rows, worst_tol));
}

void criterion6() {
  const auto rhs = RhsSpec::separable([](Vec2) { return 1.0; }, [](double s) { return s; });
  const auto eu = RadialConformalFactor::euclidean(1.0);
  const ConditionMargin good = condition_margin(rhs, eu, 2.0, test::ellipse_ring(eu));
  ExperimentConfig cfg = parse_experiment(std::string("[run]\nname = rhs_s\n") + kEllipse +
                                          "[solver]\nq = 2\ngrid = 128x256\n[analysis]\ntol = auto\n"
                                          "[rhs]\nkind = separable\ncoefficient = 1\nexponent = 1\n");
  cfg.validate();
  const VerifyResult v = run_verify(cfg);
  const auto sph = RadialConformalFactor::sphere(1.0);
  const ConditionMargin bad = condition_margin(rhs, sph, 2.0, test::round_ring(0.5, 2.0, sph));
  report(6, good.margin >= 0.0 && v.verdict && bad.margin < 0.0,
         fmt("F = s: euclidean margin %.3e (>= 0), verdict %s; sphere(r=1) outer radius 2 margin %.3e (< 0)",
             good.margin, v.verdict ? "true" : "false", bad.margin));
}

void criterion7() {
  const double circle = star_defect(RadialFunction::constant(1.0, 64), {0, 0}, 720);
  const auto petal = RadialFunction::from_fourier(std::vector<double>{1.0, 0.0, 0.0, 0.5}, {}, 720);
  const double off = star_defect(petal, {0.4, 0.0}, 720);
  double worst = std::numeric_limits<double>::infinity();
  for (double d : levels_star_defects) worst = std::min(worst, d);
  report(7, std::abs(circle - 1.0) <= 1e-9 && off < 0.0 && levels_star_defects.size() == 9 && worst >= -5e-3,
         fmt("unit circle %.12f (1 +- 1e-9); three-petal about (0.4,0) %.3e (< 0); min over %zu level sets %.3e "
             "(>= -5e-3)",
             circle, off, levels_star_defects.size(), worst));
}

void criterion8() {
  const double eu = alpha_concavity_defect(GeodesicRadialProfile(RadialConformalFactor::euclidean(1.0), 1.0), 101);
  const double hy = alpha_concavity_defect(GeodesicRadialProfile(RadialConformalFactor::hyperbolic(1.0), 0.9), 101);
  const double sp = alpha_concavity_defect(GeodesicRadialProfile(RadialConformalFactor::sphere(1.0), 3.0), 101);
  report(8, eu < 0.0 && hy < 0.0 && sp > 0.0,
         fmt("alpha concavity defect: euclidean %.3e (< 0), hyperbolic %.3e (< 0), sphere past r %.3e (> 0)", eu, hy,
             sp));
}

void criterion9() {
  auto orders = [](double q, const RadialConformalFactor& f) {
    const auto ms = test::manufacture(test::tilted_root(), f, q);
    std::vector<double> errs;
    for (int level = 0; level < 4; ++level) {
      const int m = 32 << level, k = 16 << level;
      errs.push_back(manufactured_residual(build_grid(test::ellipse_ring(f, 512), m, k), with_q(q), ms));
    }
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t p = 1; p < errs.size(); ++p) worst = std::min(worst, test::observed_order(errs[p - 1], errs[p]));
    return worst;
  };
  const double o2 = orders(2.0, RadialConformalFactor::euclidean(1.0));
  const double o3 = orders(3.0, RadialConformalFactor::hyperbolic(2.0));
  report(9, o2 >= 1.8 && o3 >= 1.5,
         fmt("manufactured residual, worst order over 3 doublings: q=2 %.2f (>= 1.8), q=3 %.2f (>= 1.5)", o2, o3));
}

void criterion10() {
  const RingGrid g = build_grid(test::round_ring(0.1, 1.0), 128, 256);
  const StarshapeReport r = starshape_report(offcenter_bump(g), 1e-3);
  report(10, r.monotonicity_defect > 1e-2 && !r.verdict,
         fmt("off-center bump: monotonicity defect %.3e (> 1e-2), verdict %s", r.monotonicity_defect,
             r.verdict ? "true" : "false"));
}

}  // namespace

int main() {
  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, criterion9);
  guarded(10, criterion10);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
