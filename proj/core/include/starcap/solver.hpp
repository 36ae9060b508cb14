#pragma once

// Dirichlet solver for the chart form of the capacitary problems,
//
//   Delta_q U + (n - q) |grad U|^{q-2} <grad log Psi, grad U> = Psi^q F(x, U, grad U)
//
// with U = inner value on the inner boundary and outer value on the outer one.
// Internally the equation is discretized in the equivalent divergence form
// div(Psi^{n-q} a grad U) = Psi^n F, a = (|grad U|^2 + eps^2)^{(q-2)/2}.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "starcap/grid.hpp"

namespace starcap {

struct SolverConfig {
  double q = 2.0;
  /// Spatial dimension of the solve; the grid is planar so this stays 2.
  int n = 2;
  double epsilon = 1e-6;
  double picard_tol = 1e-8;
  int max_picard = 200;
  double linear_tol = 1e-10;

  void validate() const;
};

/// Boundary values; the capacitary problem is {inner = 1, outer = 0}.
struct DirichletData {
  double inner = 1.0;
  double outer = 0.0;
};

/// Right-hand side F(x, s, v) >= 0 of the transformed equation.
class RhsSpec {
 public:
  using Callable = std::function<double(Vec2 x, double s, Vec2 v)>;

  static RhsSpec zero();
  /// F = a(x) b(s).
  static RhsSpec separable(std::function<double(Vec2)> a, std::function<double(double)> b);
  /// Arbitrary F; `uses_gradient` false lets the linear path accept it.
  static RhsSpec general(Callable f, bool uses_gradient = true);

  bool is_zero() const noexcept { return !f_; }
  bool uses_gradient() const noexcept { return uses_gradient_; }
  double operator()(Vec2 x, double s, Vec2 v) const { return f_ ? f_(x, s, v) : 0.0; }
  /// c * F, used by the scaling checks.
  RhsSpec scaled(double c) const;

 private:
  Callable f_;
  bool uses_gradient_ = false;
};

struct SolveResult {
  ScalarField field;
  int iterations = 0;
  double final_update = 0.0;
  bool converged = false;
  std::vector<double> update_history;
};

class LinearSolveError : public std::runtime_error {
 public:
  LinearSolveError(const std::string& what, std::vector<double> residuals)
      : std::runtime_error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residual_history() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/// Non-finite iterate; reports the first offending node.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(int j, int i);
  int angular_index() const noexcept { return j_; }
  int radial_index() const noexcept { return i_; }

 private:
  int j_;
  int i_;
};

/// q = 2 path. F may depend on (x, U) but not on grad U; a U-dependent F is
/// handled by lagged fixed-point iteration on a single factorization.
SolveResult solve_linear(const RingGrid& grid, const RhsSpec& rhs, const SolverConfig& cfg,
                         const DirichletData& bc = {});

/// General q >= 2: lagged-diffusivity Picard iteration with under-relaxation.
SolveResult solve_qlaplace(const RingGrid& grid, const RhsSpec& rhs, const SolverConfig& cfg,
                           const DirichletData& bc = {});

/// Cartesian gradient at every node (chain rule through the grid Jacobians).
std::vector<Vec2> gradient(const ScalarField& field);

/// A closed-form test solution together with the exact value of the
/// continuous operator Delta_q U + (n - q)|grad U|^{q-2} <grad log Psi, grad U>.
struct ManufacturedSolution {
  std::function<double(Vec2)> value;
  std::function<double(Vec2)> operator_value;
};

/// Sup norm over interior nodes of (discrete operator applied to the sampled
/// solution) minus its exact operator value.
double manufactured_residual(const RingGrid& grid, const SolverConfig& cfg,
                             const ManufacturedSolution& exact);

/// Sup norm of fine - coarse over coarse nodes. The fine grid must refine the
/// angular index by an integer factor; along s it is interpolated by a
/// four-point Lagrange stencil (exact on shared nodes).
double refinement_error(const ScalarField& coarse, const ScalarField& fine);

}  // namespace starcap
