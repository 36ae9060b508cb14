#include "starcap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "starcap/numerics.hpp"

namespace starcap {

MonotoneCubic::MonotoneCubic(std::vector<double> t, std::vector<double> y)
    : t_(std::move(t)), y_(std::move(y)) {
  const std::size_t n = t_.size();
  if (n < 3 || y_.size() != n) {
    throw std::invalid_argument("monotone cubic needs at least 3 (t, y) pairs of equal length");
  }
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = t_[i + 1] - t_[i];
    if (!(h[i] > 0.0)) throw std::invalid_argument("table abscissae must be strictly increasing");
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] > 0.0) {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  // Three-point end slopes, limited to keep the ends shape preserving.
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(d) > std::abs(3.0 * d0)) return 3.0 * d0;
    return d;
  };
  d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t MonotoneCubic::segment(double t) const {
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = (it == t_.begin()) ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  return std::min(i, t_.size() - 2);
}

double MonotoneCubic::value(double t) const {
  const std::size_t i = segment(t);
  const double h = t_[i + 1] - t_[i];
  const double u = (t - t_[i]) / h;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y_[i] + (u3 - 2 * u2 + u) * h * d_[i] +
         (-2 * u3 + 3 * u2) * y_[i + 1] + (u3 - u2) * h * d_[i + 1];
}

double MonotoneCubic::derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = t_[i + 1] - t_[i];
  const double u = (t - t_[i]) / h;
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * y_[i] + (-6 * u2 + 6 * u) * y_[i + 1]) / h +
         (3 * u2 - 4 * u + 1) * d_[i] + (3 * u2 - 2 * u) * d_[i + 1];
}

RadialConformalFactor RadialConformalFactor::euclidean(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("euclidean factor needs lambda > 0");
  }
  return {Kind::euclidean, lambda, std::numeric_limits<double>::infinity(), nullptr};
}

RadialConformalFactor RadialConformalFactor::sphere(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("sphere factor needs radius > 0");
  return {Kind::sphere, r, std::numeric_limits<double>::infinity(), nullptr};
}

RadialConformalFactor RadialConformalFactor::hyperbolic(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("hyperbolic factor needs radius > 0");
  }
  return {Kind::hyperbolic, r, r, nullptr};
}

RadialConformalFactor RadialConformalFactor::custom(std::vector<double> t, std::vector<double> psi) {
  if (t.empty() || t.front() != 0.0) {
    throw std::invalid_argument("custom factor table must start at t = 0");
  }
  for (double p : psi) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("custom factor table must have psi > 0");
    }
  }
  auto table = std::make_shared<MonotoneCubic>(std::move(t), std::move(psi));
  const double h0 = table->abscissae()[1] - table->abscissae()[0];
  const double slope0 = table->slopes()[0];
  if (std::abs(slope0) * h0 > 1e-3 * table->ordinates()[0]) {
    throw std::invalid_argument("custom factor table must have psi'(0) = 0 (end slope " +
                                std::to_string(slope0) + ")");
  }
  table->clamp_front_slope(0.0);
  const double radius = table->back();
  return {Kind::custom, 0.0, radius, std::move(table)};
}

RadialConformalFactor RadialConformalFactor::from_table_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> t, psi;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    if (!(row >> a)) continue;
    if (!(row >> b)) throw std::invalid_argument("factor table row needs two columns: " + line);
    t.push_back(a);
    psi.push_back(b);
  }
  return custom(std::move(t), std::move(psi));
}

void RadialConformalFactor::check_domain(double t) const {
  if (!(t >= 0.0) || !(t < domain_radius_)) {
    throw std::domain_error("radius " + std::to_string(t) + " outside the chart [0, " +
                            std::to_string(domain_radius_) + ")");
  }
}

double RadialConformalFactor::psi(double t) const {
  check_domain(t);
  switch (kind_) {
    case Kind::euclidean:
      return param_;
    case Kind::sphere:
      return 2.0 * param_ * param_ / (param_ * param_ + t * t);
    case Kind::hyperbolic:
      return 2.0 * param_ * param_ / (param_ * param_ - t * t);
    case Kind::custom:
      return table_->value(t);
  }
  return 0.0;
}

double RadialConformalFactor::dpsi(double t) const {
  check_domain(t);
  const double r2 = param_ * param_;
  switch (kind_) {
    case Kind::euclidean:
      return 0.0;
    case Kind::sphere: {
      const double den = r2 + t * t;
      return -4.0 * r2 * t / (den * den);
    }
    case Kind::hyperbolic: {
      const double den = r2 - t * t;
      return 4.0 * r2 * t / (den * den);
    }
    case Kind::custom:
      return table_->derivative(t);
  }
  return 0.0;
}

std::string RadialConformalFactor::kind_name() const {
  switch (kind_) {
    case Kind::euclidean: return "euclidean";
    case Kind::sphere: return "sphere";
    case Kind::hyperbolic: return "hyperbolic";
    case Kind::custom: return "custom";
  }
  return "unknown";
}

std::string RadialConformalFactor::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << kind_name();
  switch (kind_) {
    case Kind::euclidean: out << " lambda=" << param_; break;
    case Kind::sphere:
    case Kind::hyperbolic: out << " radius=" << param_; break;
    case Kind::custom: out << " samples=" << table_->abscissae().size() << " extent=" << domain_radius_; break;
  }
  return out.str();
}

bool operator==(const RadialConformalFactor& a, const RadialConformalFactor& b) {
  if (a.kind_ != b.kind_ || a.param_ != b.param_) return false;
  if (a.kind_ != RadialConformalFactor::Kind::custom) return true;
  if (a.table_ == b.table_) return true;
  return std::ranges::equal(a.table_->abscissae(), b.table_->abscissae()) &&
         std::ranges::equal(a.table_->ordinates(), b.table_->ordinates());
}

Vec2 log_psi_gradient(const RadialConformalFactor& factor, Vec2 x) {
  const double r = norm(x);
  const double scale = factor.dpsi(r) / factor.psi(r);
  if (r == 0.0) return {0.0, 0.0};
  return (scale / r) * x;
}

double arc_length(const RadialConformalFactor& factor, double r) {
  factor.psi(r);  // domain check
  return adaptive_simpson([&](double s) { return factor.psi(s); }, 0.0, r, 1e-10);
}

GeodesicRadialProfile::GeodesicRadialProfile(RadialConformalFactor factor, double r_p)
    : factor_(std::move(factor)), r_p_(r_p) {
  if (!(r_p > 0.0) || !(r_p < factor_.domain_radius())) {
    throw std::domain_error("geodesic endpoint radius must lie in (0, domain radius)");
  }
  total_ = arc_length(factor_, r_p_);
}

double GeodesicRadialProfile::radius_at(double t) const {
  if (!(t >= 0.0) || t > total_) throw std::domain_error("arclength outside [0, total]");
  if (t == 0.0) return 0.0;
  if (t == total_) return r_p_;
  return bracketed_root([&](double r) { return arc_length(factor_, r) - t; }, 0.0, r_p_, 1e-10);
}

double alpha_concavity_defect(const GeodesicRadialProfile& profile, int t_samples) {
  if (t_samples < 3) throw std::invalid_argument("alpha_concavity_defect needs at least 3 samples");
  const double h = profile.arc_length_total() / t_samples;
  std::vector<double> alpha(static_cast<std::size_t>(t_samples));
  for (int j = 1; j <= t_samples; ++j) {
    alpha[static_cast<std::size_t>(j - 1)] = std::log(profile.radius_at(j == t_samples ? profile.arc_length_total() : j * h));
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j + 1 < alpha.size(); ++j) {
    worst = std::max(worst, (alpha[j + 1] - 2.0 * alpha[j] + alpha[j - 1]) / (h * h));
  }
  return worst;
}

}  // namespace starcap
