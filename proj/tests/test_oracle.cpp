#include <doctest.h>

#include <cmath>
#include <random>

#include "starcap/oracle.hpp"
#include "support.hpp"

using namespace starcap;
using doctest::Approx;

TEST_CASE("radial potential closed forms") {
  const auto eu = RadialConformalFactor::euclidean(1.0);
  const RadialPotential log_pot(eu, 2, 2.0, 1.0, 2.0);
  CHECK(log_pot(std::sqrt(2.0)) == Approx(0.5).epsilon(1e-12));
  CHECK(log_pot(1.3) == Approx(std::log(2.0 / 1.3) / std::log(2.0)).epsilon(1e-11));
  const RadialPotential n3(eu, 3, 2.0, 1.0, 2.0);
  CHECK(n3(4.0 / 3.0) == Approx(0.5).epsilon(1e-12));
  CHECK(n3(1.7) == Approx((1 / 1.7 - 0.5) / 0.5).epsilon(1e-11));
  const RadialPotential q3(eu, 2, 3.0, 1.0, 2.0);
  CHECK(q3(1.5) == Approx((std::sqrt(2.0) - std::sqrt(1.5)) / (std::sqrt(2.0) - 1.0)).epsilon(1e-11));
  CHECK_THROWS(log_pot(0.9));
  CHECK_THROWS(log_pot(2.1));
  CHECK_THROWS(RadialPotential(eu, 1, 2.0, 1.0, 2.0));
  CHECK_THROWS(RadialPotential(eu, 2, 1.5, 1.0, 2.0));
  CHECK_THROWS(RadialPotential(RadialConformalFactor::hyperbolic(1.0), 2, 2.0, 0.3, 1.0));
}

TEST_CASE("factor independence when n = q") {
  const double r = 0.61;
  for (int n : {2, 3}) {
    const double q = n;
    const RadialPotential a(RadialConformalFactor::euclidean(1.0), n, q, 0.3, 0.8);
    const RadialPotential b(RadialConformalFactor::sphere(1.0), n, q, 0.3, 0.8);
    const RadialPotential c(RadialConformalFactor::hyperbolic(1.0), n, q, 0.3, 0.8);
    CHECK(std::abs(a(r) - b(r)) <= 1e-12);
    CHECK(std::abs(a(r) - c(r)) <= 1e-12);
  }
}

TEST_CASE("compare_round checks its preconditions") {
  const auto eu = RadialConformalFactor::euclidean(1.0);
  const RingGrid g = build_grid(test::round_ring(1.0, 2.0), 16, 16);
  const ScalarField u = solve_linear(g, RhsSpec::zero(), SolverConfig{}).field;
  CHECK(compare_round(u, RadialPotential(eu, 2, 2.0, 1.0, 2.0)) <= 1e-2);
  CHECK_THROWS(compare_round(u, RadialPotential(eu, 2, 2.0, 1.0, 2.5)));
  CHECK_THROWS(compare_round(u, RadialPotential(eu, 2, 3.0, 1.0, 2.0)));
  CHECK_THROWS(compare_round(u, RadialPotential(eu, 3, 2.0, 1.0, 2.0)));
  CHECK_THROWS(compare_round(u, RadialPotential(RadialConformalFactor::sphere(1.0), 2, 2.0, 1.0, 2.0)));
  const ScalarField e = solve_linear(build_grid(test::ellipse_ring(), 16, 16), RhsSpec::zero(), SolverConfig{}).field;
  CHECK_THROWS(compare_round(e, RadialPotential(eu, 2, 2.0, 1.0, 2.0)));
  // a radially sampled field compared against its own profile is exact
  auto profile = [](double r) { return std::log(2.0 / r) / std::log(2.0); };
  std::vector<double> table(g.size());
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) table[g.index(j, i)] = profile(g.node_radius(j, i));
  CHECK(compare_profile(ScalarField(g, table), profile) == 0.0);
}

TEST_CASE("solver matches the oracle on curved factors") {
  for (auto f : {RadialConformalFactor::sphere(1.0), RadialConformalFactor::hyperbolic(1.0)}) {
    SolverConfig c;
    c.q = 3.0;
    const auto r = solve_qlaplace(build_grid(test::round_ring(0.3, 0.8, f), 64, 128), RhsSpec::zero(), c);
    CHECK(r.converged);
    CHECK(compare_round(r.field, RadialPotential(f, 2, 3.0, 0.3, 0.8)) <= 1e-2);
  }
}

TEST_CASE("property: boundary values and strict monotonicity") {
  std::mt19937_64 rng(29);
  for (auto f : {RadialConformalFactor::euclidean(1.0), RadialConformalFactor::sphere(1.0),
                 RadialConformalFactor::hyperbolic(1.0)}) {
    for (int n : {2, 3, 4}) {
      for (double q : {2.0, 2.5, 4.0}) {
        const RadialPotential pot(f, n, q, 0.3, 0.8);
        CHECK(std::abs(pot(0.3) - 1.0) <= 1e-12);
        CHECK(std::abs(pot(0.8)) <= 1e-12);
        std::uniform_real_distribution<double> u(0.3, 0.8);
        for (int p = 0; p < 100; ++p) {
          double a = u(rng), b = u(rng);
          if (a > b) std::swap(a, b);
          if (b - a > 1e-9) CHECK(pot(a) > pot(b));
        }
      }
    }
  }
}

TEST_CASE("property: compare_round converges under refinement") {
  const auto eu = RadialConformalFactor::euclidean(1.0);
  const RadialPotential pot(eu, 2, 2.0, 1.0, 2.0);
  double prev = 0.0;
  for (int level = 0; level < 3; ++level) {
    const int m = 16 << level, k = 8 << level;
    const double e =
        compare_round(solve_linear(build_grid(test::round_ring(1.0, 2.0), m, k), RhsSpec::zero(), SolverConfig{}).field, pot);
    if (level > 0) CHECK(test::observed_order(prev, e) >= 1.5);
    prev = e;
  }
}
