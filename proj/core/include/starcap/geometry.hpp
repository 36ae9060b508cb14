#pragma once

// Radial conformal factors of rotationally symmetric charts, where the metric
// reads g_ij = psi(|x|)^2 delta_ij, and the radial geodesic profile built on
// top of them.

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "starcap/vec2.hpp"

namespace starcap {

/// C^1 monotonicity-preserving piecewise cubic (Fritsch-Carlson) through a table.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> t, std::vector<double> y);

  double value(double t) const;
  double derivative(double t) const;
  double front() const { return t_.front(); }
  double back() const { return t_.back(); }
  std::span<const double> abscissae() const { return t_; }
  std::span<const double> ordinates() const { return y_; }
  std::span<const double> slopes() const { return d_; }

  /// Overrides the Hermite slope at node 0.
  void clamp_front_slope(double slope) { d_.front() = slope; }

 private:
  std::size_t segment(double t) const;

  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> d_;
};

class RadialConformalFactor {
 public:
  enum class Kind { euclidean, sphere, hyperbolic, custom };

  /// psi == lambda: scaled identity chart of flat space.
  static RadialConformalFactor euclidean(double lambda);
  /// Stereographic chart of the round sphere of radius r: psi = 2r^2 / (r^2 + t^2).
  static RadialConformalFactor sphere(double r);
  /// Poincare disk of curvature -1/r^2: psi = 2r^2 / (r^2 - t^2) on [0, r).
  static RadialConformalFactor hyperbolic(double r);
  /// Sampled psi. The table must start at t = 0 with a vanishing end slope.
  static RadialConformalFactor custom(std::vector<double> t, std::vector<double> psi);
  /// Two whitespace-separated columns (t psi); '#' starts a comment.
  static RadialConformalFactor from_table_text(const std::string& text);

  Kind kind() const noexcept { return kind_; }
  /// lambda for euclidean, r for sphere/hyperbolic, 0 for custom.
  double parameter() const noexcept { return param_; }
  double domain_radius() const noexcept { return domain_radius_; }

  /// psi(t); throws std::domain_error unless 0 <= t < domain_radius().
  double psi(double t) const;
  double dpsi(double t) const;

  std::string kind_name() const;
  /// Canonical one-line description, e.g. "sphere radius=1".
  std::string describe() const;

  friend bool operator==(const RadialConformalFactor& a, const RadialConformalFactor& b);

 private:
  RadialConformalFactor(Kind kind, double param, double domain_radius,
                        std::shared_ptr<const MonotoneCubic> table)
      : kind_(kind), param_(param), domain_radius_(domain_radius), table_(std::move(table)) {}
  void check_domain(double t) const;

  Kind kind_;
  double param_;
  double domain_radius_;
  std::shared_ptr<const MonotoneCubic> table_;
};

/// psi_eval.
inline double psi_eval(const RadialConformalFactor& factor, double t) { return factor.psi(t); }

/// grad log Psi at x with Psi(x) = psi(|x|); zero at the origin.
Vec2 log_psi_gradient(const RadialConformalFactor& factor, Vec2 x);

/// Phi(r) = integral of psi over [0, r] (adaptive Simpson, absolute tolerance 1e-10).
double arc_length(const RadialConformalFactor& factor, double r);

/// Unit-speed radial geodesic from the chart origin out to coordinate radius r_p.
/// Along it the coordinate radius r(t) satisfies psi(r) r' = 1, i.e. Phi(r(t)) = t.
class GeodesicRadialProfile {
 public:
  GeodesicRadialProfile(RadialConformalFactor factor, double r_p);

  const RadialConformalFactor& factor() const noexcept { return factor_; }
  double endpoint_radius() const noexcept { return r_p_; }
  double arc_length_total() const noexcept { return total_; }

  /// Coordinate radius after arclength t in [0, arc_length_total()].
  double radius_at(double t) const;

 private:
  RadialConformalFactor factor_;
  double r_p_;
  double total_;
};

/// Largest centered second difference of log r(t) over `t_samples` uniform
/// samples of (0, arc_length_total]. Non-positive values indicate concavity.
double alpha_concavity_defect(const GeodesicRadialProfile& profile, int t_samples);

}  // namespace starcap
