#pragma once

// Body-fitted (s, theta) grid over a starshaped ring and nodal fields on it.
// Node (j, i) sits at (rho1 + s_i (rho0 - rho1))(theta_j) (cos, sin)(theta_j)
// with s_i = i / (k - 1) and theta_j = 2 pi j / m, so constant-theta lines
// are segments of rays through the origin.

#include <cstddef>
#include <span>
#include <vector>

#include "starcap/domains.hpp"
#include "starcap/vec2.hpp"

namespace starcap {

/// 2x2 matrix with columns (d x / d s, d x / d theta).
struct Jacobian2 {
  Vec2 ds;
  Vec2 dtheta;
  double det() const { return cross(ds, dtheta); }
};

/// Exact metric data of the (s, theta) map at one point, written as the
/// coefficients of the conservative operator:
///   J div(k grad U) = d_s(k (P U_s + A U_th)) + d_th(k (A U_s + Q U_th)).
struct MetricTerms {
  double radius;  // |x|
  double jac;     // J = (rho0 - rho1) * |x|
  double p;       // J g^{ss}
  double a;       // J g^{s theta}
  double q;       // J g^{theta theta}
};

class RingGrid {
 public:
  RingGrid(StarshapedRing ring, int m, int k);

  const StarshapedRing& ring() const noexcept { return ring_; }
  int angular() const noexcept { return m_; }
  int radial() const noexcept { return k_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(m_) * static_cast<std::size_t>(k_); }
  /// theta-major index of node (j, i).
  std::size_t index(int j, int i) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(i);
  }
  int wrap(int j) const noexcept { return ((j % m_) + m_) % m_; }

  double ds() const noexcept { return 1.0 / (k_ - 1); }
  double dtheta() const noexcept;
  double s(int i) const noexcept { return static_cast<double>(i) / (k_ - 1); }
  double theta(int j) const noexcept;

  Vec2 node(int j, int i) const noexcept { return nodes_[index(j, i)]; }
  double node_radius(int j, int i) const noexcept { return radius_[index(j, i)]; }
  /// Discrete Jacobian: the same difference stencils that gradient() applies to fields.
  const Jacobian2& jacobian(int j, int i) const noexcept { return jac_[index(j, i)]; }
  std::span<const Vec2> nodes() const noexcept { return nodes_; }

  /// Metric coefficients at an arbitrary (s, theta), from the spline boundaries.
  MetricTerms metric(double s, double theta) const;

 private:
  StarshapedRing ring_;
  int m_;
  int k_;
  std::vector<Vec2> nodes_;
  std::vector<double> radius_;
  std::vector<Jacobian2> jac_;
};

/// build_grid: m >= 8 angular and k >= 3 radial nodes. Throws if the
/// Jacobian determinant drops below 1e-12 anywhere.
RingGrid build_grid(const StarshapedRing& ring, int m, int k);

/// Nodal values on a RingGrid, theta-major like the grid.
struct ScalarField {
  RingGrid grid;
  std::vector<double> values;
  /// Exponent of the problem this field solves (metadata for dumps and oracles).
  double q = 2.0;

  ScalarField(RingGrid g, std::vector<double> v, double exponent = 2.0);
  double at(int j, int i) const noexcept { return values[grid.index(j, i)]; }
  double& at(int j, int i) noexcept { return values[grid.index(j, i)]; }
};

/// Field from a closed-form function of the node position.
template <typename Fn>
ScalarField sample_field(const RingGrid& grid, Fn&& fn, double q = 2.0) {
  std::vector<double> values(grid.size());
  for (int j = 0; j < grid.angular(); ++j)
    for (int i = 0; i < grid.radial(); ++i) values[grid.index(j, i)] = fn(grid.node(j, i));
  return ScalarField(grid, std::move(values), q);
}

}  // namespace starcap
