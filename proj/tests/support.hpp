#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "starcap/domains.hpp"
#include "starcap/geometry.hpp"
#include "starcap/grid.hpp"
#include "starcap/solver.hpp"

namespace starcap::test {

inline StarshapedRing round_ring(double r1, double r0,
                                 RadialConformalFactor f = RadialConformalFactor::euclidean(1.0), int m = 64) {
  return StarshapedRing(RadialFunction::constant(r0, m), RadialFunction::constant(r1, m), std::move(f));
}

// rho0 = 1.5 + 0.3 cos 2t, rho1 = 0.5 + 0.1 cos t
inline StarshapedRing ellipse_ring(RadialConformalFactor f = RadialConformalFactor::euclidean(1.0), int m = 256) {
  const std::vector<double> outer{1.5, 0.0, 0.3};
  const std::vector<double> inner{0.5, 0.1};
  return StarshapedRing(RadialFunction::from_fourier(outer, {}, m), RadialFunction::from_fourier(inner, {}, m),
                        std::move(f));
}

// Smooth closed-form field with gradient and Hessian, used to build manufactured right sides.
struct Smooth {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> grad;
  std::function<std::array<double, 3>(Vec2)> hess;  // xx, xy, yy
};

// Psi^{q-n} div(Psi^{n-q} a grad U) with a = (|grad U|^2 + eps^2)^{(q-2)/2}, n = 2.
inline ManufacturedSolution manufacture(const Smooth& u, const RadialConformalFactor& f, double q,
                                        double eps = 1e-6) {
  auto op = [u, f, q, eps](Vec2 x) {
    const Vec2 g = u.grad(x);
    const auto h = u.hess(x);
    const double g2 = dot(g, g) + eps * eps;
    const double a = std::pow(g2, (q - 2.0) / 2.0);
    const Vec2 hg{h[0] * g.x + h[1] * g.y, h[1] * g.x + h[2] * g.y};
    const double da_dot_g = (q - 2.0) * std::pow(g2, (q - 4.0) / 2.0) * dot(hg, g);
    return a * (h[0] + h[2]) + da_dot_g + (2.0 - q) * a * dot(log_psi_gradient(f, x), g);
  };
  return {u.value, op};
}

// sqrt|x| + 0.1 x1 + 0.05 x1 x2: non-radial, gradient bounded away from zero on the test rings.
inline Smooth tilted_root() {
  return {[](Vec2 x) { return std::sqrt(norm(x)) + 0.1 * x.x + 0.05 * x.x * x.y; },
          [](Vec2 x) {
            const double r = norm(x);
            const double c = 0.5 * std::pow(r, -1.5);
            return Vec2{c * x.x + 0.1 + 0.05 * x.y, c * x.y + 0.05 * x.x};
          },
          [](Vec2 x) {
            const double r = norm(x);
            const double c = 0.5 * std::pow(r, -1.5);
            const double d = -0.75 * std::pow(r, -3.5);
            return std::array<double, 3>{c + d * x.x * x.x, d * x.x * x.y + 0.05, c + d * x.y * x.y};
          }};
}

inline double observed_order(double coarse_err, double fine_err) { return std::log2(coarse_err / fine_err); }

}  // namespace starcap::test
