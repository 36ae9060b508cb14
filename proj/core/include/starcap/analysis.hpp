#pragma once

// Quasi-starshapedness checks for computed potentials: the envelope
// U*(x) = sup{U(t x) : 1 <= t < T_x}, ray-monotonicity and normal-vector
// defects, superlevel-set boundaries, and the scaling condition on F.

#include <array>
#include <limits>

#include "starcap/domains.hpp"
#include "starcap/grid.hpp"
#include "starcap/solver.hpp"

namespace starcap {

/// Suffix maximum along every ray (increasing s).
ScalarField envelope(const ScalarField& field);

struct StarshapeReport {
  /// max over nodes of U* - U.
  double envelope_defect = 0.0;
  /// max over rays of the summed positive increments of U going outward.
  double monotonicity_defect = 0.0;
  /// max over interior nodes of <grad U, x>_+ / (|grad U| |x| + 1e-12), skipping |grad U| < 1e-8.
  double normal_defect = 0.0;
  double tolerance = 0.0;
  bool verdict = true;
};

StarshapeReport starshape_report(const ScalarField& field, double tol);

struct SuperlevelBoundary {
  /// Coordinate radius of the outermost crossing on each grid ray.
  RadialFunction radius;
  /// False when some ray crosses the level more than once.
  bool unique_crossing = true;
};

/// Boundary of {U > level}; throws if some ray never reaches the level.
SuperlevelBoundary superlevel_boundary(const ScalarField& field, double level);

struct ConditionSamples {
  int x_count = 16;
  int tau_count = 8;
  int s_count = 8;
  int v_count = 8;
  /// Shift in [0, 1) of the angular sample sequence.
  double angle_offset = 0.0;
};

struct ConditionMargin {
  /// min of tau^q Psi(tau x)^q F(tau x, s, v / tau) - Psi(x)^q F(x, s, v).
  double margin = std::numeric_limits<double>::infinity();
  Vec2 x{};
  double tau = 1.0;
  double s = 0.0;
  Vec2 v{};
  /// min over samples of F(x, s2, v) - F(x, s1, v) with s2 > s1 (monotonicity in s).
  double s_monotonicity = std::numeric_limits<double>::infinity();
};

/// Samples the scaling condition on F over the ring, tau in [1, T_x], s in
/// [0, 1] and v on circles of radius 0.1, 1 and 10.
ConditionMargin condition_margin(const RhsSpec& rhs, const RadialConformalFactor& factor, double q,
                                 const StarshapedRing& ring, const ConditionSamples& samples = {});

/// U = 1 - |x - (0.3, 0)|^2: superlevel sets are off-centre disks, so the field
/// rises along the ray theta = 0 wherever the ring reaches inside r = 0.3.
ScalarField offcenter_bump(const RingGrid& grid);

}  // namespace starcap
