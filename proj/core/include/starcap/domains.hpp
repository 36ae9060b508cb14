#pragma once

// Starshaped domains in chart coordinates: radial graphs about the origin,
// and rings made of two such graphs.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "starcap/geometry.hpp"
#include "starcap/vec2.hpp"

namespace starcap {

/// Periodic boundary radius theta -> rho(theta) > 0, stored as m equispaced
/// samples rho(2 pi j / m) and interpolated by a periodic cubic spline.
class RadialFunction {
 public:
  explicit RadialFunction(std::vector<double> samples);

  /// rho = a[0] + sum_k a[k] cos(k theta) + b[k-1] sin(k theta), sampled at m nodes.
  static RadialFunction from_fourier(std::span<const double> cos_coeffs,
                                     std::span<const double> sin_coeffs, int m);
  static RadialFunction constant(double radius, int m = 64);

  double value(double theta) const;
  double derivative(double theta) const;
  double second_derivative(double theta) const;

  std::span<const double> samples() const { return samples_; }
  int size() const { return static_cast<int>(samples_.size()); }
  double max_value() const;
  double min_value() const;

 private:
  struct Local {
    std::size_t j;
    double t;
  };
  Local locate(double theta) const;

  std::vector<double> samples_;
  std::vector<double> curvature_;  // spline second derivatives at the nodes
  double h_;
};

/// Condenser X = X0 \ closure(X1) with X0, X1 radial graphs in the chart of `factor`.
class StarshapedRing {
 public:
  StarshapedRing(RadialFunction outer, RadialFunction inner, RadialConformalFactor factor);

  const RadialFunction& outer() const noexcept { return outer_; }
  const RadialFunction& inner() const noexcept { return inner_; }
  const RadialConformalFactor& factor() const noexcept { return factor_; }

  /// True when both boundaries are circles (sample spread <= rel_tol).
  bool is_round(double rel_tol = 1e-12) const;
  bool contains(Vec2 x) const;

  /// Canonical sampled description used in dumps and reports.
  std::string describe() const;
  /// FNV-1a hash of describe(), hex encoded.
  std::string hash() const;

 private:
  RadialFunction outer_;
  RadialFunction inner_;
  RadialConformalFactor factor_;
};

/// rho(theta) (cos theta, sin theta).
Vec2 boundary_point(const RadialFunction& rho, double theta);

/// Outward unit normal of theta -> rho(theta)(cos theta, sin theta).
Vec2 outward_normal(const RadialFunction& rho, double theta);

/// min over sampled theta of <nu(x), x - center>; non-negative iff the sampled
/// region is starshaped about `center`. Throws if center is not strictly inside.
double star_defect(const RadialFunction& rho, Vec2 center, int theta_samples);

/// Ray exit time sup{t >= 1 : t x in closure(X0)} = rho0(theta_x) / |x|.
double t_exit(const StarshapedRing& ring, Vec2 x);

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace starcap
