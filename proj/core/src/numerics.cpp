#include "starcap/numerics.hpp"

#include <cmath>
#include <utility>

namespace starcap {
namespace {

struct Panel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return refine(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         refine(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, abs_tol, max_depth);
  // Start from a few panels so narrow features are not skipped by the first estimate.
  constexpr int kPanels = 8;
  const double h = (b - a) / kPanels;
  double total = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double lo = a + p * h;
    const double hi = (p == kPanels - 1) ? b : lo + h;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    total += refine(f, {lo, mid, hi, flo, fmid, fhi, simpson(lo, hi, flo, fmid, fhi)},
                    abs_tol / kPanels, max_depth);
  }
  return total;
}

double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      double x_tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(std::isfinite(flo) && std::isfinite(fhi)) || (flo > 0.0) == (fhi > 0.0)) {
    throw RootFindError("root not bracketed", lo, hi);
  }
  double prev_width = hi - lo;
  for (int it = 0; it < max_iter; ++it) {
    const double width = hi - lo;
    if (width <= x_tol) break;
    double x = lo - flo * (hi - lo) / (fhi - flo);
    // Fall back to bisection when the secant leaves the bracket or stalls.
    const bool stalled = width > 0.5 * prev_width;
    if (!(x > lo && x < hi) || (stalled && it % 2 == 1)) x = 0.5 * (lo + hi);
    prev_width = width;
    const double fx = f(x);
    if (!std::isfinite(fx)) throw RootFindError("non-finite function value", lo, hi);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    // Secant iterates approach from one side; a tiny step past x closes the bracket.
    if (hi - lo > x_tol) {
      const double probe_lo = x - 0.5 * x_tol;
      const double probe_hi = x + 0.5 * x_tol;
      if (x == lo && probe_hi < hi) {
        const double fp = f(probe_hi);
        if ((fp > 0.0) != (flo > 0.0)) { hi = probe_hi; fhi = fp; }
      } else if (x == hi && probe_lo > lo) {
        const double fp = f(probe_lo);
        if ((fp > 0.0) == (flo > 0.0)) { lo = probe_lo; flo = fp; }
      }
    }
  }
  if (hi - lo > x_tol) throw RootFindError("root search did not converge", lo, hi);
  return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

}  // namespace starcap
