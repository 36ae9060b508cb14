#include "starcap/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace starcap {

RingGrid::RingGrid(StarshapedRing ring, int m, int k) : ring_(std::move(ring)), m_(m), k_(k) {
  if (m < 8) throw std::invalid_argument("grid needs at least 8 angular nodes");
  if (k < 3) throw std::invalid_argument("grid needs at least 3 radial nodes");
  nodes_.resize(size());
  radius_.resize(size());
  jac_.resize(size());
  for (int j = 0; j < m_; ++j) {
    const double th = theta(j);
    const double r1 = ring_.inner().value(th);
    const double r0 = ring_.outer().value(th);
    for (int i = 0; i < k_; ++i) {
      const double r = r1 + s(i) * (r0 - r1);
      radius_[index(j, i)] = r;
      nodes_[index(j, i)] = polar(r, th);
    }
  }
  const double hs = ds(), ht = dtheta();
  for (int j = 0; j < m_; ++j) {
    for (int i = 0; i < k_; ++i) {
      Vec2 dx_ds;
      if (i == 0) {
        dx_ds = (1.0 / (2.0 * hs)) * (4.0 * (node(j, 1) - node(j, 0)) - (node(j, 2) - node(j, 0)));
      } else if (i == k_ - 1) {
        dx_ds = (1.0 / (2.0 * hs)) * (4.0 * (node(j, i) - node(j, i - 1)) - (node(j, i) - node(j, i - 2)));
      } else {
        dx_ds = (1.0 / (2.0 * hs)) * (node(j, i + 1) - node(j, i - 1));
      }
      const Vec2 dx_dt = (1.0 / (2.0 * ht)) * (node(wrap(j + 1), i) - node(wrap(j - 1), i));
      Jacobian2 J{dx_ds, dx_dt};
      if (!(J.det() >= 1e-12)) {
        throw std::runtime_error("degenerate ring grid: Jacobian determinant " + std::to_string(J.det()) +
                                 " at node (" + std::to_string(j) + ", " + std::to_string(i) + ")");
      }
      jac_[index(j, i)] = J;
    }
  }
}

double RingGrid::dtheta() const noexcept { return 2.0 * std::numbers::pi / m_; }
double RingGrid::theta(int j) const noexcept { return 2.0 * std::numbers::pi * j / m_; }

MetricTerms RingGrid::metric(double s, double theta) const {
  const double r1 = ring_.inner().value(theta);
  const double r0 = ring_.outer().value(theta);
  const double d = r0 - r1;
  const double r = r1 + s * d;
  const double r_theta = ring_.inner().derivative(theta) +
                         s * (ring_.outer().derivative(theta) - ring_.inner().derivative(theta));
  return {r, d * r, (r_theta * r_theta + r * r) / (d * r), -r_theta / r, d / r};
}

RingGrid build_grid(const StarshapedRing& ring, int m, int k) { return RingGrid(ring, m, k); }

ScalarField::ScalarField(RingGrid g, std::vector<double> v, double exponent)
    : grid(std::move(g)), values(std::move(v)), q(exponent) {
  if (values.size() != grid.size()) throw std::invalid_argument("field size does not match its grid");
}

}  // namespace starcap
