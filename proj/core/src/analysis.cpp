#include "starcap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace starcap {

ScalarField envelope(const ScalarField& field) {
  ScalarField out = field;
  const RingGrid& g = field.grid;
  for (int j = 0; j < g.angular(); ++j) {
    double running = -std::numeric_limits<double>::infinity();
    for (int i = g.radial() - 1; i >= 0; --i) {
      running = std::max(running, field.at(j, i));
      out.at(j, i) = running;
    }
  }
  return out;
}

StarshapeReport starshape_report(const ScalarField& field, double tol) {
  StarshapeReport report;
  report.tolerance = tol;
  const RingGrid& g = field.grid;
  const ScalarField star = envelope(field);
  for (std::size_t p = 0; p < field.values.size(); ++p) {
    report.envelope_defect = std::max(report.envelope_defect, star.values[p] - field.values[p]);
  }
  for (int j = 0; j < g.angular(); ++j) {
    double rise = 0.0;
    for (int i = 0; i + 1 < g.radial(); ++i) rise += std::max(0.0, field.at(j, i + 1) - field.at(j, i));
    report.monotonicity_defect = std::max(report.monotonicity_defect, rise);
  }
  const std::vector<Vec2> grad = gradient(field);
  for (int j = 0; j < g.angular(); ++j) {
    for (int i = 1; i + 1 < g.radial(); ++i) {
      const Vec2 du = grad[g.index(j, i)];
      const double magnitude = norm(du);
      if (magnitude < 1e-8) continue;
      const Vec2 x = g.node(j, i);
      const double cosine = dot(du, x) / (magnitude * norm(x) + 1e-12);
      report.normal_defect = std::max(report.normal_defect, cosine);
    }
  }
  report.verdict = report.envelope_defect <= tol && report.monotonicity_defect <= tol && report.normal_defect <= tol;
  return report;
}

SuperlevelBoundary superlevel_boundary(const ScalarField& field, double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0, 1)");
  const RingGrid& g = field.grid;
  std::vector<double> radius(static_cast<std::size_t>(g.angular()));
  bool unique = true;
  for (int j = 0; j < g.angular(); ++j) {
    int crossings = 0;
    int outer = -1;
    for (int i = 0; i + 1 < g.radial(); ++i) {
      if ((field.at(j, i) > level) != (field.at(j, i + 1) > level)) {
        ++crossings;
        if (field.at(j, i) > level) outer = i;
      }
    }
    if (outer < 0) {
      throw std::runtime_error("level " + std::to_string(level) + " is never crossed downward on ray j=" +
                               std::to_string(j));
    }
    if (crossings > 1) unique = false;
    const double u0 = field.at(j, outer), u1 = field.at(j, outer + 1);
    const double frac = (u0 - level) / (u0 - u1);
    const double r0 = g.node_radius(j, outer), r1 = g.node_radius(j, outer + 1);
    radius[static_cast<std::size_t>(j)] = r0 + frac * (r1 - r0);
  }
  return {RadialFunction(std::move(radius)), unique};
}

ConditionMargin condition_margin(const RhsSpec& rhs, const RadialConformalFactor& factor, double q,
                                 const StarshapedRing& ring, const ConditionSamples& samples) {
  if (samples.x_count < 2 || samples.tau_count < 2 || samples.s_count < 2 || samples.v_count < 2) {
    throw std::invalid_argument("condition_margin needs at least 2 samples per axis");
  }
  ConditionMargin best;
  constexpr double kGolden = 0.6180339887498949;
  constexpr std::array<double, 3> kMagnitudes{0.1, 1.0, 10.0};
  for (int a = 0; a < samples.x_count; ++a) {
    // Kronecker sequence in angle, stratified in the radial fraction of the ring.
    const double theta = 2.0 * std::numbers::pi * std::fmod(a * kGolden + samples.angle_offset, 1.0);
    const double frac = (a + 0.5) / samples.x_count;
    const double r1 = ring.inner().value(theta), r0 = ring.outer().value(theta);
    const Vec2 x = polar(r1 + frac * (r0 - r1), theta);
    const double t_max = t_exit(ring, x);
    const double psi_x = std::pow(factor.psi(norm(x)), q);
    for (int b = 0; b < samples.tau_count; ++b) {
      const double tau = 1.0 + (t_max - 1.0) * b / (samples.tau_count - 1);
      const Vec2 tx = tau * x;
      const double lhs_scale = std::pow(tau, q) * std::pow(factor.psi(std::min(norm(tx), ring.outer().value(theta))), q);
      for (int c = 0; c < samples.s_count; ++c) {
        const double s = static_cast<double>(c) / (samples.s_count - 1);
        for (int d = 0; d < samples.v_count; ++d) {
          const double phi = 2.0 * std::numbers::pi * d / samples.v_count;
          for (double mag : kMagnitudes) {
            const Vec2 v = polar(mag, phi);
            const double gap = lhs_scale * rhs(tx, s, (1.0 / tau) * v) - psi_x * rhs(x, s, v);
            if (gap < best.margin) best = {gap, x, tau, s, v, best.s_monotonicity};
            if (c > 0 && b == 0) {
              const double s_prev = static_cast<double>(c - 1) / (samples.s_count - 1);
              best.s_monotonicity = std::min(best.s_monotonicity, rhs(x, s, v) - rhs(x, s_prev, v));
            }
          }
        }
      }
    }
  }
  return best;
}

ScalarField offcenter_bump(const RingGrid& grid) {
  return sample_field(grid, [](Vec2 x) {
    const Vec2 d = x - Vec2{0.3, 0.0};
    return 1.0 - dot(d, d);
  });
}

}  // namespace starcap
