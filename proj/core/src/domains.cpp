#include "starcap/domains.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace starcap {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Solves the cyclic system c[j-1] + 4 c[j] + c[j+1] = rhs[j] (Sherman-Morrison).
std::vector<double> solve_cyclic_141(const std::vector<double>& rhs) {
  const std::size_t n = rhs.size();
  // Split A = B + u v^T with u = (gamma, 0, .., 0, 1), v = (1, 0, .., 0, 1/gamma).
  const double gamma = -4.0;
  std::vector<double> diag(n, 4.0);
  diag[0] = 4.0 - gamma;
  diag[n - 1] = 4.0 - 1.0 / gamma;
  auto thomas = [&](std::vector<double> d) {
    std::vector<double> c(n), b = diag;
    for (std::size_t i = 1; i < n; ++i) {
      const double w = 1.0 / b[i - 1];
      b[i] -= w;
      d[i] -= w * d[i - 1];
    }
    c[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) c[i] = (d[i] - c[i + 1]) / b[i];
    return c;
  };
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = 1.0;
  const std::vector<double> y = thomas(rhs);
  const std::vector<double> z = thomas(u);
  const double vy = y[0] + y[n - 1] / gamma;
  const double vz = z[0] + z[n - 1] / gamma;
  const double factor = vy / (1.0 + vz);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] - factor * z[i];
  return out;
}

}  // namespace

RadialFunction::RadialFunction(std::vector<double> samples) : samples_(std::move(samples)) {
  const std::size_t m = samples_.size();
  if (m < 3) throw std::invalid_argument("radial function needs at least 3 samples");
  for (double s : samples_) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("radial function samples must be positive and finite");
    }
  }
  h_ = kTwoPi / static_cast<double>(m);
  std::vector<double> rhs(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double prev = samples_[(j + m - 1) % m];
    const double next = samples_[(j + 1) % m];
    rhs[j] = 6.0 / (h_ * h_) * (next - 2.0 * samples_[j] + prev);
  }
  curvature_ = solve_cyclic_141(rhs);
}

RadialFunction RadialFunction::from_fourier(std::span<const double> cos_coeffs,
                                            std::span<const double> sin_coeffs, int m) {
  if (cos_coeffs.empty()) throw std::invalid_argument("fourier radial function needs a constant term");
  if (m < 3) throw std::invalid_argument("fourier radial function needs at least 3 samples");
  std::vector<double> samples(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double theta = kTwoPi * j / m;
    double v = cos_coeffs[0];
    for (std::size_t k = 1; k < cos_coeffs.size(); ++k) v += cos_coeffs[k] * std::cos(static_cast<double>(k) * theta);
    for (std::size_t k = 0; k < sin_coeffs.size(); ++k) v += sin_coeffs[k] * std::sin(static_cast<double>(k + 1) * theta);
    samples[static_cast<std::size_t>(j)] = v;
  }
  return RadialFunction(std::move(samples));
}

RadialFunction RadialFunction::constant(double radius, int m) {
  return RadialFunction(std::vector<double>(static_cast<std::size_t>(m), radius));
}

RadialFunction::Local RadialFunction::locate(double theta) const {
  const double m = static_cast<double>(samples_.size());
  double u = theta / kTwoPi * m;
  // Snap to nodes so node evaluations reproduce the samples exactly.
  const double nearest = std::round(u);
  if (std::abs(u - nearest) < 1e-9 * std::max(1.0, std::abs(u))) u = nearest;
  double whole = std::floor(u);
  double t = u - whole;
  long long j = static_cast<long long>(whole) % static_cast<long long>(samples_.size());
  if (j < 0) j += static_cast<long long>(samples_.size());
  return {static_cast<std::size_t>(j), t};
}

double RadialFunction::value(double theta) const {
  const auto [j, t] = locate(theta);
  const std::size_t k = (j + 1) % samples_.size();
  if (t == 0.0) return samples_[j];
  const double s = 1.0 - t;
  return s * samples_[j] + t * samples_[k] +
         h_ * h_ / 6.0 * ((s * s * s - s) * curvature_[j] + (t * t * t - t) * curvature_[k]);
}

double RadialFunction::derivative(double theta) const {
  const auto [j, t] = locate(theta);
  const std::size_t k = (j + 1) % samples_.size();
  const double s = 1.0 - t;
  return (samples_[k] - samples_[j]) / h_ +
         h_ / 6.0 * ((1.0 - 3.0 * s * s) * curvature_[j] + (3.0 * t * t - 1.0) * curvature_[k]);
}

double RadialFunction::second_derivative(double theta) const {
  const auto [j, t] = locate(theta);
  const std::size_t k = (j + 1) % samples_.size();
  return (1.0 - t) * curvature_[j] + t * curvature_[k];
}

double RadialFunction::max_value() const {
  // A spline can overshoot its samples; probe between nodes too.
  double best = 0.0;
  const int probes = 8 * size();
  for (int p = 0; p < probes; ++p) best = std::max(best, value(kTwoPi * p / probes));
  return best;
}

double RadialFunction::min_value() const {
  double best = samples_.front();
  const int probes = 8 * size();
  for (int p = 0; p < probes; ++p) best = std::min(best, value(kTwoPi * p / probes));
  return best;
}

StarshapedRing::StarshapedRing(RadialFunction outer, RadialFunction inner, RadialConformalFactor factor)
    : outer_(std::move(outer)), inner_(std::move(inner)), factor_(std::move(factor)) {
  if (inner_.min_value() <= 0.0) {
    throw std::invalid_argument("inner radius must stay positive between samples");
  }
  const int probes = 8 * std::max(outer_.size(), inner_.size());
  for (int p = 0; p < probes; ++p) {
    const double theta = kTwoPi * p / probes;
    if (!(inner_.value(theta) < outer_.value(theta))) {
      throw std::invalid_argument("inner radius must be strictly less than outer radius at every angle");
    }
  }
  if (!(outer_.max_value() < factor_.domain_radius())) {
    throw std::invalid_argument("outer boundary must lie inside the chart (max radius < domain radius)");
  }
}

bool StarshapedRing::is_round(double rel_tol) const {
  auto round = [rel_tol](const RadialFunction& f) {
    const auto [lo, hi] = std::ranges::minmax(f.samples());
    return hi - lo <= rel_tol * hi;
  };
  return round(outer_) && round(inner_);
}

bool StarshapedRing::contains(Vec2 x) const {
  const double r = norm(x);
  const double theta = std::atan2(x.y, x.x);
  return r > inner_.value(theta) && r < outer_.value(theta);
}

std::string StarshapedRing::describe() const {
  auto emit = [](std::ostringstream& out, const RadialFunction& f) {
    out << f.size() << ":";
    char buf[32];
    for (int j = 0; j < f.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", f.samples()[static_cast<std::size_t>(j)]);
      out << (j ? "," : "") << buf;
    }
  };
  std::ostringstream out;
  out << "outer=";
  emit(out, outer_);
  out << " inner=";
  emit(out, inner_);
  out << " factor=" << factor_.describe();
  return out.str();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string StarshapedRing::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(describe())));
  return buf;
}

Vec2 boundary_point(const RadialFunction& rho, double theta) {
  return polar(rho.value(theta), theta);
}

Vec2 outward_normal(const RadialFunction& rho, double theta) {
  const double r = rho.value(theta);
  const double dr = rho.derivative(theta);
  const double c = std::cos(theta), s = std::sin(theta);
  const Vec2 n{r * c + dr * s, r * s - dr * c};
  return (1.0 / norm(n)) * n;
}

double star_defect(const RadialFunction& rho, Vec2 center, int theta_samples) {
  if (theta_samples < 1) throw std::invalid_argument("star_defect needs at least one sample");
  const double rc = norm(center);
  if (rc > 0.0 && !(rc < rho.value(std::atan2(center.y, center.x)) - 1e-12)) {
    throw std::invalid_argument("star center must lie strictly inside the curve");
  }
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j < theta_samples; ++j) {
    const double theta = kTwoPi * j / theta_samples;
    worst = std::min(worst, dot(outward_normal(rho, theta), boundary_point(rho, theta) - center));
  }
  return worst;
}

double t_exit(const StarshapedRing& ring, Vec2 x) {
  const double r = norm(x);
  if (r == 0.0) throw std::domain_error("exit time undefined at the origin");
  const double outer = ring.outer().value(std::atan2(x.y, x.x));
  if (r > outer * (1.0 + 1e-12)) throw std::domain_error("point lies outside the outer domain");
  return std::max(1.0, outer / r);
}

}  // namespace starcap
