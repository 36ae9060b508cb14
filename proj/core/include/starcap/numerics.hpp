#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace starcap {

/// Raised when a bracketing root search cannot proceed; carries the bracket.
class RootFindError : public std::runtime_error {
 public:
  RootFindError(const std::string& what, double lo, double hi)
      : std::runtime_error(what + " in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        lo_(lo), hi_(hi) {}
  double lower() const noexcept { return lo_; }
  double upper() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Adaptive Simpson quadrature with Richardson correction.
/// `abs_tol` bounds the estimated absolute error of the whole integral.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 48);

/// Root of a continuous f on [lo, hi] with f(lo), f(hi) of opposite sign.
/// Secant steps are accepted only when they stay inside the shrinking bracket;
/// otherwise the bracket is bisected.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      double x_tol, int max_iter = 200);

}  // namespace starcap
