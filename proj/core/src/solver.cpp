#include "starcap/solver.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>

namespace starcap {

void SolverConfig::validate() const {
  if (!(q >= 2.0) || !std::isfinite(q)) throw std::invalid_argument("exponent q must satisfy q >= 2");
  if (n != 2) throw std::invalid_argument("the planar solver requires n = 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be positive");
  if (!(linear_tol > 0.0)) throw std::invalid_argument("linear_tol must be positive");
  if (max_picard < 1) throw std::invalid_argument("max_picard must be at least 1");
}

RhsSpec RhsSpec::zero() { return {}; }

RhsSpec RhsSpec::separable(std::function<double(Vec2)> a, std::function<double(double)> b) {
  RhsSpec spec;
  spec.f_ = [a = std::move(a), b = std::move(b)](Vec2 x, double s, Vec2) { return a(x) * b(s); };
  return spec;
}

RhsSpec RhsSpec::general(Callable f, bool uses_gradient) {
  RhsSpec spec;
  spec.f_ = std::move(f);
  spec.uses_gradient_ = uses_gradient;
  return spec;
}

RhsSpec RhsSpec::scaled(double c) const {
  if (!f_) return *this;
  RhsSpec spec = *this;
  spec.f_ = [f = f_, c](Vec2 x, double s, Vec2 v) { return c * f(x, s, v); };
  return spec;
}

NonFiniteError::NonFiniteError(int j, int i)
    : std::runtime_error("non-finite solver iterate at node (j=" + std::to_string(j) +
                         ", i=" + std::to_string(i) + ")"),
      j_(j), i_(i) {}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

std::vector<Vec2> nodal_gradient(const RingGrid& g, std::span<const double> u) {
  const int m = g.angular(), k = g.radial();
  const double hs = g.ds(), ht = g.dtheta();
  std::vector<Vec2> out(g.size());
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < k; ++i) {
      auto at = [&](int jj, int ii) { return u[g.index(g.wrap(jj), ii)]; };
      double us;
      if (i == 0) {
        us = (4.0 * (at(j, 1) - at(j, 0)) - (at(j, 2) - at(j, 0))) / (2.0 * hs);
      } else if (i == k - 1) {
        us = (4.0 * (at(j, i) - at(j, i - 1)) - (at(j, i) - at(j, i - 2))) / (2.0 * hs);
      } else {
        us = (at(j, i + 1) - at(j, i - 1)) / (2.0 * hs);
      }
      const double ut = (at(j + 1, i) - at(j - 1, i)) / (2.0 * ht);
      const Jacobian2& J = g.jacobian(j, i);
      const double det = J.det();
      out[g.index(j, i)] = {(us * J.dtheta.y - J.ds.y * ut) / det, (J.ds.x * ut - J.dtheta.x * us) / det};
    }
  }
  return out;
}

// Face-centred metric data and diffusion coefficients of the flux form.
// s-face (j, i + 1/2) is stored at j * (k - 1) + i, theta-face (j + 1/2, i) at j * k + i.
class Discretization {
 public:
  Discretization(const RingGrid& g, const SolverConfig& cfg) : g_(g), cfg_(cfg) {
    const int m = g.angular(), k = g.radial();
    const double hs = g.ds(), ht = g.dtheta();
    const RadialConformalFactor& factor = g.ring().factor();
    const double power = static_cast<double>(cfg.n) - cfg.q;
    sface_.resize(static_cast<std::size_t>(m) * (k - 1));
    tface_.resize(static_cast<std::size_t>(m) * k);
    node_.resize(g.size());
    sweight_.resize(sface_.size());
    tweight_.resize(tface_.size());
    node_psi_.resize(g.size());
    for (int j = 0; j < m; ++j) {
      const double th = g.theta(j);
      for (int i = 0; i + 1 < k; ++i) {
        const MetricTerms mt = g.metric((i + 0.5) * hs, th);
        sface_[sidx(j, i)] = mt;
        sweight_[sidx(j, i)] = std::pow(factor.psi(mt.radius), power);
      }
      for (int i = 0; i < k; ++i) {
        const MetricTerms mt = g.metric(g.s(i), th + 0.5 * ht);
        tface_[tidx(j, i)] = mt;
        tweight_[tidx(j, i)] = std::pow(factor.psi(mt.radius), power);
        node_[g.index(j, i)] = g.metric(g.s(i), th);
        node_psi_[g.index(j, i)] = factor.psi(node_[g.index(j, i)].radius);
      }
    }
    skappa_ = sweight_;
    tkappa_ = tweight_;
  }

  // a = (|grad U|^2 + eps^2)^{(q-2)/2} from face difference quotients of u.
  void update_coefficients(std::span<const double> u) {
    const int m = g_.angular(), k = g_.radial();
    const double hs = g_.ds(), ht = g_.dtheta();
    const double expo = 0.5 * (cfg_.q - 2.0);
    const double eps2 = cfg_.epsilon * cfg_.epsilon;
    auto at = [&](int j, int i) { return u[g_.index(g_.wrap(j), i)]; };
    auto coefficient = [&](const MetricTerms& mt, double us, double ut) {
      const double grad2 = (mt.p * us * us + 2.0 * mt.a * us * ut + mt.q * ut * ut) / mt.jac;
      return std::pow(std::max(grad2, 0.0) + eps2, expo);
    };
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i + 1 < k; ++i) {
        const double us = (at(j, i + 1) - at(j, i)) / hs;
        const double ut = (at(j + 1, i + 1) - at(j - 1, i + 1) + at(j + 1, i) - at(j - 1, i)) / (4.0 * ht);
        skappa_[sidx(j, i)] = sweight_[sidx(j, i)] * coefficient(sface_[sidx(j, i)], us, ut);
      }
      for (int i = 1; i + 1 < k; ++i) {
        const double ut = (at(j + 1, i) - at(j, i)) / ht;
        const double us = (at(j + 1, i + 1) - at(j + 1, i - 1) + at(j, i + 1) - at(j, i - 1)) / (4.0 * hs);
        tkappa_[tidx(j, i)] = tweight_[tidx(j, i)] * coefficient(tface_[tidx(j, i)], us, ut);
      }
    }
  }

  // Weights of J * div(kappa grad U) at interior node (j, i); entry (dj + 1) * 3 + (di + 1).
  std::array<double, 9> stencil(int j, int i) const {
    std::array<double, 9> w{};
    auto add = [&w](int dj, int di, double v) { w[static_cast<std::size_t>((dj + 1) * 3 + (di + 1))] += v; };
    const double hs = g_.ds(), ht = g_.dtheta();
    {
      const MetricTerms& mt = sface_[sidx(j, i)];
      const double f = skappa_[sidx(j, i)] / hs;
      add(0, 1, f * mt.p / hs);
      add(0, 0, -f * mt.p / hs);
      const double c = f * mt.a / (4.0 * ht);
      add(1, 1, c); add(-1, 1, -c); add(1, 0, c); add(-1, 0, -c);
    }
    {
      const MetricTerms& mt = sface_[sidx(j, i - 1)];
      const double f = skappa_[sidx(j, i - 1)] / hs;
      add(0, 0, -f * mt.p / hs);
      add(0, -1, f * mt.p / hs);
      const double c = f * mt.a / (4.0 * ht);
      add(1, 0, -c); add(-1, 0, c); add(1, -1, -c); add(-1, -1, c);
    }
    {
      const MetricTerms& mt = tface_[tidx(j, i)];
      const double f = tkappa_[tidx(j, i)] / ht;
      add(1, 0, f * mt.q / ht);
      add(0, 0, -f * mt.q / ht);
      const double c = f * mt.a / (4.0 * hs);
      add(1, 1, c); add(1, -1, -c); add(0, 1, c); add(0, -1, -c);
    }
    {
      const int jm = g_.wrap(j - 1);
      const MetricTerms& mt = tface_[tidx(jm, i)];
      const double f = tkappa_[tidx(jm, i)] / ht;
      add(0, 0, -f * mt.q / ht);
      add(-1, 0, f * mt.q / ht);
      const double c = f * mt.a / (4.0 * hs);
      add(0, 1, -c); add(0, -1, c); add(-1, 1, -c); add(-1, -1, c);
    }
    return w;
  }

  double apply(std::span<const double> u, int j, int i) const {
    const auto w = stencil(j, i);
    double acc = 0.0;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di)
        acc += w[static_cast<std::size_t>((dj + 1) * 3 + (di + 1))] * u[g_.index(g_.wrap(j + dj), i + di)];
    return acc;
  }

  const MetricTerms& node_metric(int j, int i) const { return node_[g_.index(j, i)]; }
  double node_psi(int j, int i) const { return node_psi_[g_.index(j, i)]; }

 private:
  std::size_t sidx(int j, int i) const {
    return static_cast<std::size_t>(g_.wrap(j)) * static_cast<std::size_t>(g_.radial() - 1) + static_cast<std::size_t>(i);
  }
  std::size_t tidx(int j, int i) const {
    return static_cast<std::size_t>(g_.wrap(j)) * static_cast<std::size_t>(g_.radial()) + static_cast<std::size_t>(i);
  }

  const RingGrid& g_;
  SolverConfig cfg_;
  std::vector<MetricTerms> sface_, tface_, node_;
  std::vector<double> sweight_, tweight_, skappa_, tkappa_, node_psi_;
};

// Interior unknowns (j, i), i = 1..k-2, numbered j * (k - 2) + (i - 1).
class LinearSystem {
 public:
  LinearSystem(const RingGrid& g, const SolverConfig& cfg, const DirichletData& bc)
      : g_(g), cfg_(cfg), bc_(bc), rows_(static_cast<Eigen::Index>(g.angular()) * (g.radial() - 2)) {}

  void assemble(const Discretization& disc) {
    const int m = g_.angular(), k = g_.radial();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(rows_) * 9);
    boundary_rhs_ = Eigen::VectorXd::Zero(rows_);
    for (int j = 0; j < m; ++j) {
      for (int i = 1; i + 1 < k; ++i) {
        const auto w = disc.stencil(j, i);
        const Eigen::Index row = unknown(j, i);
        for (int dj = -1; dj <= 1; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            const double wt = w[static_cast<std::size_t>((dj + 1) * 3 + (di + 1))];
            const int ii = i + di;
            if (ii == 0) {
              boundary_rhs_[row] -= wt * bc_.inner;
            } else if (ii == k - 1) {
              boundary_rhs_[row] -= wt * bc_.outer;
            } else {
              triplets.emplace_back(row, unknown(g_.wrap(j + dj), ii), wt);
            }
          }
        }
      }
    }
    matrix_.resize(rows_, rows_);
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
    matrix_.makeCompressed();
    if (!analyzed_) {
      lu_.analyzePattern(matrix_);
      analyzed_ = true;
    }
    lu_.factorize(matrix_);
    if (lu_.info() != Eigen::Success) {
      throw LinearSolveError("sparse LU factorization failed: " + lu_.lastErrorMessage(), {});
    }
  }

  // Solves with source J Psi^n F(x, U_prev, grad U_prev) and returns the full nodal field.
  std::vector<double> solve(const Discretization& disc, const RhsSpec& rhs, std::span<const double> prev) {
    const int m = g_.angular(), k = g_.radial();
    Eigen::VectorXd b = boundary_rhs_;
    if (!rhs.is_zero()) {
      std::vector<Vec2> grad;
      if (rhs.uses_gradient()) grad = nodal_gradient(g_, prev);
      const double n = static_cast<double>(cfg_.n);
      for (int j = 0; j < m; ++j) {
        for (int i = 1; i + 1 < k; ++i) {
          const std::size_t node = g_.index(j, i);
          const Vec2 v = grad.empty() ? Vec2{} : grad[node];
          b[unknown(j, i)] += disc.node_metric(j, i).jac * std::pow(disc.node_psi(j, i), n) *
                              rhs(g_.node(j, i), prev[node], v);
        }
      }
    }
    Eigen::VectorXd x = lu_.solve(b);
    std::vector<double> history;
    const double bnorm = b.lpNorm<Eigen::Infinity>();
    double anorm = 0.0;
    for (Eigen::Index c = 0; c < matrix_.outerSize(); ++c) {
      for (SpMat::InnerIterator it(matrix_, c); it; ++it) anorm = std::max(anorm, std::abs(it.value()));
    }
    anorm *= 9.0;
    for (int pass = 0;; ++pass) {
      const Eigen::VectorXd r = b - matrix_ * x;
      const double scaled = r.lpNorm<Eigen::Infinity>() / (anorm * x.lpNorm<Eigen::Infinity>() + bnorm + 1e-300);
      history.push_back(scaled);
      if (!std::isfinite(scaled)) break;
      if (scaled <= cfg_.linear_tol) break;
      if (pass == 3) {
        throw LinearSolveError("linear residual " + std::to_string(scaled) + " above linear_tol", history);
      }
      x += lu_.solve(r);
    }
    std::vector<double> out(g_.size());
    for (int j = 0; j < m; ++j) {
      out[g_.index(j, 0)] = bc_.inner;
      out[g_.index(j, k - 1)] = bc_.outer;
      for (int i = 1; i + 1 < k; ++i) {
        const double v = x[unknown(j, i)];
        if (!std::isfinite(v)) throw NonFiniteError(j, i);
        out[g_.index(j, i)] = v;
      }
    }
    return out;
  }

 private:
  Eigen::Index unknown(int j, int i) const {
    return static_cast<Eigen::Index>(j) * (g_.radial() - 2) + (i - 1);
  }

  const RingGrid& g_;
  SolverConfig cfg_;
  DirichletData bc_;
  Eigen::Index rows_;
  SpMat matrix_;
  Eigen::VectorXd boundary_rhs_;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  bool analyzed_ = false;
};

SolveResult picard(const RingGrid& grid, const RhsSpec& rhs, const SolverConfig& cfg, const DirichletData& bc) {
  cfg.validate();
  const bool nonlinear = cfg.q != 2.0;
  const bool lagged_rhs = !rhs.is_zero();
  double omega = nonlinear ? 2.0 / cfg.q : 1.0;
  if (lagged_rhs) omega = std::min(omega, 0.8);

  std::vector<double> u(grid.size());
  for (int j = 0; j < grid.angular(); ++j)
    for (int i = 0; i < grid.radial(); ++i)
      u[grid.index(j, i)] = bc.inner + grid.s(i) * (bc.outer - bc.inner);

  Discretization disc(grid, cfg);
  LinearSystem system(grid, cfg, bc);
  system.assemble(disc);
  u = system.solve(disc, rhs, u);

  SolveResult result{ScalarField(grid, u, cfg.q), 0, 0.0, false, {}};
  if (!nonlinear && !lagged_rhs) {
    result.field.values = std::move(u);
    result.iterations = 1;
    result.converged = true;
    return result;
  }

  std::vector<double> best = u;
  double best_update = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= cfg.max_picard; ++it) {
    if (nonlinear) {
      disc.update_coefficients(u);
      system.assemble(disc);
    }
    std::vector<double> next = system.solve(disc, rhs, u);
    double update = 0.0;
    for (std::size_t p = 0; p < u.size(); ++p) {
      const double relaxed = omega * next[p] + (1.0 - omega) * u[p];
      update = std::max(update, std::abs(relaxed - u[p]));
      u[p] = relaxed;
    }
    result.update_history.push_back(update);
    result.iterations = it;
    if (update < best_update) {
      best_update = update;
      best = u;
    }
    if (update <= cfg.picard_tol) {
      result.converged = true;
      result.final_update = update;
      result.field.values = std::move(u);
      return result;
    }
  }
  result.final_update = best_update;
  result.field.values = std::move(best);
  return result;
}

}  // namespace

SolveResult solve_linear(const RingGrid& grid, const RhsSpec& rhs, const SolverConfig& cfg, const DirichletData& bc) {
  if (cfg.q != 2.0) throw std::invalid_argument("solve_linear requires q = 2");
  if (rhs.uses_gradient()) throw std::invalid_argument("solve_linear requires a right-hand side independent of grad U");
  return picard(grid, rhs, cfg, bc);
}

SolveResult solve_qlaplace(const RingGrid& grid, const RhsSpec& rhs, const SolverConfig& cfg, const DirichletData& bc) {
  return picard(grid, rhs, cfg, bc);
}

std::vector<Vec2> gradient(const ScalarField& field) { return nodal_gradient(field.grid, field.values); }

double manufactured_residual(const RingGrid& grid, const SolverConfig& cfg, const ManufacturedSolution& exact) {
  cfg.validate();
  std::vector<double> u(grid.size());
  for (int j = 0; j < grid.angular(); ++j)
    for (int i = 0; i < grid.radial(); ++i) u[grid.index(j, i)] = exact.value(grid.node(j, i));
  Discretization disc(grid, cfg);
  if (cfg.q != 2.0) disc.update_coefficients(u);
  const double power = static_cast<double>(cfg.n) - cfg.q;
  double worst = 0.0;
  for (int j = 0; j < grid.angular(); ++j) {
    for (int i = 1; i + 1 < grid.radial(); ++i) {
      const double scale = disc.node_metric(j, i).jac * std::pow(disc.node_psi(j, i), power);
      const double discrete = disc.apply(u, j, i) / scale;
      worst = std::max(worst, std::abs(discrete - exact.operator_value(grid.node(j, i))));
    }
  }
  return worst;
}

double refinement_error(const ScalarField& coarse, const ScalarField& fine) {
  const RingGrid& gc = coarse.grid;
  const RingGrid& gf = fine.grid;
  if (gf.angular() % gc.angular() != 0) {
    throw std::invalid_argument("fine angular count must be a multiple of the coarse one");
  }
  if (gf.radial() < 4) throw std::invalid_argument("fine grid needs at least 4 radial nodes");
  const int stride = gf.angular() / gc.angular();
  const int kf = gf.radial();
  double worst = 0.0;
  for (int j = 0; j < gc.angular(); ++j) {
    const int jf = j * stride;
    for (int i = 0; i < gc.radial(); ++i) {
      const double u = gc.s(i) * (kf - 1);
      const double nearest = std::round(u);
      double value;
      if (std::abs(u - nearest) < 1e-9) {
        value = fine.at(jf, static_cast<int>(nearest));
      } else {
        const int i0 = std::clamp(static_cast<int>(std::floor(u)) - 1, 0, kf - 4);
        value = 0.0;
        for (int a = 0; a < 4; ++a) {
          double basis = 1.0;
          for (int b = 0; b < 4; ++b) {
            if (b != a) basis *= (u - (i0 + b)) / static_cast<double>(a - b);
          }
          value += basis * fine.at(jf, i0 + a);
        }
      }
      worst = std::max(worst, std::abs(value - coarse.at(j, i)));
    }
  }
  return worst;
}

}  // namespace starcap
