#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "starcap/geometry.hpp"
#include "starcap/numerics.hpp"

using namespace starcap;
using doctest::Approx;

TEST_CASE("psi values per kind") {
  CHECK(RadialConformalFactor::euclidean(1.0).psi(0.7) == 1.0);
  CHECK(RadialConformalFactor::sphere(1.0).psi(1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(RadialConformalFactor::hyperbolic(1.0).psi(0.5) == Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(psi_eval(RadialConformalFactor::sphere(2.0), 0.0) == 2.0);
}

TEST_CASE("psi domain errors") {
  CHECK_THROWS_AS(RadialConformalFactor::hyperbolic(1.0).psi(1.0), std::domain_error);
  CHECK_THROWS_AS(RadialConformalFactor::euclidean(1.0).psi(-0.1), std::domain_error);
  CHECK_THROWS_AS(RadialConformalFactor::euclidean(-1.0), std::invalid_argument);
  CHECK(std::isinf(RadialConformalFactor::sphere(1.0).domain_radius()));
  CHECK(RadialConformalFactor::hyperbolic(3.0).domain_radius() == 3.0);
}

TEST_CASE("log psi gradient") {
  const Vec2 e = log_psi_gradient(RadialConformalFactor::euclidean(2.0), {0.3, 0.4});
  CHECK(e.x == 0.0);
  CHECK(e.y == 0.0);
  for (auto f : {RadialConformalFactor::sphere(1.0), RadialConformalFactor::hyperbolic(1.0)}) {
    const Vec2 z = log_psi_gradient(f, {0.0, 0.0});
    CHECK(z.x == 0.0);
    CHECK(z.y == 0.0);
  }
  const Vec2 s = log_psi_gradient(RadialConformalFactor::sphere(1.0), {1.0, 0.0});
  CHECK(s.x == Approx(-1.0).epsilon(1e-14));
  CHECK(s.y == 0.0);
  // finite-difference cross-check of d/dt log psi at t = 1
  const auto f = RadialConformalFactor::sphere(1.0);
  const double h = 1e-6;
  CHECK((std::log(f.psi(1 + h)) - std::log(f.psi(1 - h))) / (2 * h) == Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("arc length closed forms") {
  CHECK(arc_length(RadialConformalFactor::euclidean(1.0), 2.0) == Approx(2.0).epsilon(1e-12));
  CHECK(arc_length(RadialConformalFactor::sphere(1.0), 1.0) == Approx(std::numbers::pi / 2).epsilon(1e-10));
  CHECK(arc_length(RadialConformalFactor::hyperbolic(1.0), 0.5) == Approx(std::log(3.0)).epsilon(1e-10));
  // 2r atan(t/r) for sphere(r = 2)
  CHECK(arc_length(RadialConformalFactor::sphere(2.0), 3.0) == Approx(4.0 * std::atan(1.5)).epsilon(1e-10));
  CHECK(arc_length(RadialConformalFactor::sphere(1.0), 0.0) == 0.0);
}

TEST_CASE("geodesic profile inversion") {
  const GeodesicRadialProfile sph(RadialConformalFactor::sphere(1.0), 3.0);
  CHECK(sph.arc_length_total() == Approx(2 * std::atan(3.0)).epsilon(1e-10));
  // r(t) = tan(t/2) for the unit sphere factor
  for (double t : {0.1, 0.7, 1.5, 2.4}) CHECK(sph.radius_at(t) == Approx(std::tan(t / 2)).epsilon(1e-9));
  const GeodesicRadialProfile hyp(RadialConformalFactor::hyperbolic(1.0), 0.9);
  for (double t : {0.1, 0.7, 1.4}) CHECK(hyp.radius_at(t) == Approx(std::tanh(t / 2)).epsilon(1e-9));
  CHECK_THROWS(GeodesicRadialProfile(RadialConformalFactor::hyperbolic(1.0), 1.0));
  CHECK_THROWS(sph.radius_at(sph.arc_length_total() + 0.1));
}

TEST_CASE("alpha concavity defect sign") {
  CHECK(alpha_concavity_defect(GeodesicRadialProfile(RadialConformalFactor::euclidean(1.0), 1.0), 101) < 0.0);
  CHECK(alpha_concavity_defect(GeodesicRadialProfile(RadialConformalFactor::hyperbolic(1.0), 0.9), 101) < 0.0);
  CHECK(alpha_concavity_defect(GeodesicRadialProfile(RadialConformalFactor::sphere(1.0), 3.0), 101) > 0.0);
  // inside the equator the sphere profile is still concave
  CHECK(alpha_concavity_defect(GeodesicRadialProfile(RadialConformalFactor::sphere(1.0), 0.9), 101) < 0.0);
  CHECK_THROWS(alpha_concavity_defect(GeodesicRadialProfile(RadialConformalFactor::euclidean(1.0), 1.0), 2));
}

TEST_CASE("custom table factor") {
  const auto f = RadialConformalFactor::from_table_text("# t psi\n0 2\n0.2 1.98\n0.5 1.6\n1 1\n2 0.4\n3 0.2\n");
  CHECK(f.kind() == RadialConformalFactor::Kind::custom);
  CHECK(f.psi(0.5) == Approx(1.6).epsilon(1e-14));
  CHECK(f.dpsi(0.0) == Approx(0.0).epsilon(1e-12));
  CHECK(f.domain_radius() == 3.0);
  CHECK_THROWS(f.psi(3.0));
  CHECK_THROWS(RadialConformalFactor::custom({0, 1, 0.5}, {1, 1, 1}));
  CHECK_THROWS(RadialConformalFactor::custom({0, 1}, {1, -1}));
  CHECK_THROWS(RadialConformalFactor::custom({0, 0.5, 1}, {2, 1.6, 1}));
  CHECK_THROWS(RadialConformalFactor::custom({0.1, 0.5, 1}, {2, 2, 1}));
  // the sphere table reproduces the closed form closely
  std::vector<double> t, y;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(i * 0.01);
    y.push_back(2.0 / (1.0 + t.back() * t.back()));
  }
  const auto tab = RadialConformalFactor::custom(t, y);
  CHECK(tab.psi(0.555) == Approx(2.0 / (1.0 + 0.555 * 0.555)).epsilon(1e-6));
}

TEST_CASE("numerics") {
  CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12) ==
        Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  CHECK(bracketed_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14) ==
        Approx(std::sqrt(2.0)).epsilon(1e-13));
  try {
    bracketed_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12);
    FAIL("expected RootFindError");
  } catch (const RootFindError& e) {
    CHECK(e.lower() == -1.0);
    CHECK(e.upper() == 1.0);
  }
}

TEST_CASE("property: dpsi matches centered differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 0.95);
  const std::vector<RadialConformalFactor> kinds{
      RadialConformalFactor::euclidean(1.3), RadialConformalFactor::sphere(0.8),
      RadialConformalFactor::hyperbolic(1.0),
      RadialConformalFactor::custom({0, 0.25, 0.5, 0.75, 1.0}, {1.0, 1.0, 1.1, 1.3, 1.6})};
  for (const auto& f : kinds) {
    for (int n = 0; n < 100; ++n) {
      const double t = u(rng);
      const double h = 1e-5;
      const double fd = (f.psi(t + h) - f.psi(t - h)) / (2 * h);
      const double scale = std::max(std::abs(f.dpsi(t)), 1e-3);
      CHECK(std::abs(fd - f.dpsi(t)) / scale <= 1e-6);
    }
  }
}

TEST_CASE("property: arc length monotone and inversion round trip") {
  std::mt19937_64 rng(5);
  for (auto f : {RadialConformalFactor::sphere(1.0), RadialConformalFactor::hyperbolic(1.0),
                 RadialConformalFactor::euclidean(2.0)}) {
    std::uniform_real_distribution<double> u(0.0, 0.95);
    std::vector<double> r(40);
    for (double& v : r) v = u(rng);
    std::sort(r.begin(), r.end());
    for (std::size_t i = 1; i < r.size(); ++i) {
      if (r[i] > r[i - 1]) CHECK(arc_length(f, r[i]) > arc_length(f, r[i - 1]));
    }
    const GeodesicRadialProfile prof(f, 0.95);
    std::uniform_real_distribution<double> ut(0.0, prof.arc_length_total());
    for (int n = 0; n < 30; ++n) {
      const double t = ut(rng);
      CHECK(std::abs(arc_length(f, prof.radius_at(t)) - t) <= 1e-8);
    }
  }
}

TEST_CASE("property: log psi gradient is radial") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (auto f : {RadialConformalFactor::sphere(1.0), RadialConformalFactor::hyperbolic(1.0)}) {
    for (int n = 0; n < 100; ++n) {
      const Vec2 x{u(rng), u(rng)};
      if (norm(x) < 1e-3) continue;
      CHECK(std::abs(cross(log_psi_gradient(f, x), x)) <= 1e-12);
    }
  }
}
