#include "starcap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "starcap/numerics.hpp"

namespace starcap {

RadialPotential::RadialPotential(RadialConformalFactor factor, int n, double q, double r1, double r0)
    : factor_(std::move(factor)), n_(n), q_(q), r1_(r1), r0_(r0) {
  if (n < 2) throw std::invalid_argument("dimension must be at least 2");
  if (!(q >= 2.0)) throw std::invalid_argument("exponent q must satisfy q >= 2");
  if (!(r1 > 0.0)) throw std::invalid_argument("inner radius must be positive");
  if (!(r1 < r0)) throw std::invalid_argument("inner radius must be strictly less than outer radius");
  if (!(r0 < factor_.domain_radius())) throw std::invalid_argument("outer radius must lie inside the chart");
  // Coarse pass fixes the scale for the relative tolerance.
  const auto w = [this](double s) { return weight(s); };
  const double rough = adaptive_simpson(w, r1_, r0_, 1e-6 * (r0_ - r1_) * weight(r1_));
  total_ = adaptive_simpson(w, r1_, r0_, 1e-13 * std::abs(rough));
}

double RadialPotential::weight(double s) const {
  const double n = static_cast<double>(n_);
  return std::exp(((q_ - n) * std::log(factor_.psi(s)) + (1.0 - n) * std::log(s)) / (q_ - 1.0));
}

double RadialPotential::operator()(double r) const {
  if (!(r >= r1_ && r <= r0_)) throw std::domain_error("radius outside [R1, R0]");
  if (r == r1_) return 1.0;
  if (r == r0_) return 0.0;
  const auto w = [this](double s) { return weight(s); };
  const double tail = adaptive_simpson(w, r, r0_, 1e-13 * total_);
  return std::clamp(tail / total_, 0.0, 1.0);
}

double compare_profile(const ScalarField& field, const std::function<double(double)>& profile) {
  const RingGrid& g = field.grid;
  double worst = 0.0;
  for (int j = 0; j < g.angular(); ++j)
    for (int i = 0; i < g.radial(); ++i)
      worst = std::max(worst, std::abs(field.at(j, i) - profile(g.node_radius(j, i))));
  return worst;
}

double compare_round(const ScalarField& field, const RadialPotential& pot) {
  const StarshapedRing& ring = field.grid.ring();
  if (!ring.is_round()) throw std::invalid_argument("oracle comparison needs a round ring");
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
  if (!same(ring.inner().samples()[0], pot.inner_radius()) || !same(ring.outer().samples()[0], pot.outer_radius())) {
    throw std::invalid_argument("ring radii do not match the oracle radii");
  }
  if (!(ring.factor() == pot.factor())) throw std::invalid_argument("ring factor does not match the oracle factor");
  if (pot.dimension() != 2) throw std::invalid_argument("planar fields compare against n = 2 oracles only");
  if (field.q != pot.exponent()) throw std::invalid_argument("field exponent does not match the oracle exponent");
  // Round ring: the radius depends on i only, so evaluate the oracle once per radial index.
  const RingGrid& g = field.grid;
  std::vector<double> profile(static_cast<std::size_t>(g.radial()));
  for (int i = 0; i < g.radial(); ++i) {
    const double r = std::clamp(g.node_radius(0, i), pot.inner_radius(), pot.outer_radius());
    profile[static_cast<std::size_t>(i)] = i == 0 ? 1.0 : (i == g.radial() - 1 ? 0.0 : pot(r));
  }
  double worst = 0.0;
  for (int j = 0; j < g.angular(); ++j)
    for (int i = 0; i < g.radial(); ++i)
      worst = std::max(worst, std::abs(field.at(j, i) - profile[static_cast<std::size_t>(i)]));
  return worst;
}

}  // namespace starcap
