#pragma once

// Exact radial capacitary potentials of round annuli R1 < |x| < R0.
//
// For U = U(r) the chart equation is
//   Delta_q U + (n - q)|U'|^{q-2} (psi'/psi) U' = 0,
// and multiplying by the integrating factor psi^{n-q} r^{n-1} turns it into
//   (psi^{n-q} r^{n-1} |U'|^{q-2} U')' = 0.
// Hence |U'| = c (psi^{q-n} r^{1-n})^{1/(q-1)} and, with U(R1) = 1, U(R0) = 0,
//   U(r) = int_r^{R0} w / int_{R1}^{R0} w,   w(s) = (psi(s)^{q-n} s^{1-n})^{1/(q-1)}.

#include <functional>

#include "starcap/geometry.hpp"
#include "starcap/grid.hpp"

namespace starcap {

class RadialPotential {
 public:
  RadialPotential(RadialConformalFactor factor, int n, double q, double r1, double r0);

  const RadialConformalFactor& factor() const noexcept { return factor_; }
  int dimension() const noexcept { return n_; }
  double exponent() const noexcept { return q_; }
  double inner_radius() const noexcept { return r1_; }
  double outer_radius() const noexcept { return r0_; }

  /// U(r) for r in [R1, R0] (relative quadrature error <= 1e-10).
  double operator()(double r) const;
  /// The integrand w(s) above.
  double weight(double s) const;

 private:
  RadialConformalFactor factor_;
  int n_;
  double q_;
  double r1_;
  double r0_;
  double total_;
};

inline double radial_potential(const RadialPotential& pot, double r) { return pot(r); }

/// max over nodes of |U_field - U_oracle(|x|)|. The field must come from a
/// round ring with radii (R1, R0), the same factor and the same q, with n = 2.
double compare_round(const ScalarField& field, const RadialPotential& pot);

/// max over nodes of |U_field - profile(|x|)| for any radial profile.
double compare_profile(const ScalarField& field, const std::function<double(double)>& profile);

}  // namespace starcap
