#include "replidyn/replicator.hpp"

#include "replidyn/numeric.hpp"
#include "stepper.hpp"

#include <cmath>
#include <string>

namespace replidyn {

namespace {

void require_square_match(const PayoffMatrix& a, const PopulationState& x) {
  if (!a.square()) throw std::invalid_argument("payoff matrix must be square");
  if (a.cols() != x.size()) {
    throw std::invalid_argument("payoff matrix and population state dimensions differ");
  }
}

// dx_i/dt = [f_i(x) - <f(x)>] x_i, defined for any vector (the integrator
// evaluates it at intermediate stages slightly off the simplex).
Eigen::VectorXd field_raw(const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
  const Eigen::VectorXd f = a * x;
  const double avg = x.dot(f);
  return ((f.array() - avg) * x.array()).matrix();
}

Eigen::VectorXd growth_factors(const Eigen::MatrixXd& payoff, const Eigen::VectorXd& own,
                               const Eigen::VectorXd& other, AsymmetricIndexing indexing) {
  const Eigen::VectorXd f = payoff * other;
  const double avg = own.dot(f);
  if (indexing == AsymmetricIndexing::first_component) {
    return ((f(0) - avg) * own.array()).matrix();
  }
  return ((f.array() - avg) * own.array()).matrix();
}

void check_finite(const Eigen::VectorXd& x, Eigen::Index step, double t) {
  if (!x.allFinite()) {
    throw NumericalError("integration produced a non-finite state at step " +
                         std::to_string(step) + " (t = " + std::to_string(t) + ")");
  }
}

// Post-step cleanup: clamp below, optionally renormalize.
void project_to_simplex(Eigen::VectorXd& x, const IntegratorConfig& cfg) {
  x = x.cwiseMax(cfg.boundary_clip);
  if (cfg.renormalize_each_step) {
    const double sum = x.sum();
    if (!(sum > 0.0)) throw NumericalError("population mass vanished during integration");
    x /= sum;
  }
}

template <typename Field>
Eigen::VectorXd advance(const Field& f, const Eigen::VectorXd& x, const IntegratorConfig& cfg) {
  return cfg.method == Method::rk4_fixed ? detail::rk4_step(f, x, cfg.dt)
                                         : detail::euler_step(f, x, cfg.dt);
}

}  // namespace

void IntegratorConfig::validate(Eigen::Index n) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("integrator dt must be positive and finite");
  }
  if (!(t_max > dt) || !std::isfinite(t_max)) {
    throw std::invalid_argument("integrator t_max must exceed dt");
  }
  if (boundary_clip < 0.0 || !std::isfinite(boundary_clip)) {
    throw std::invalid_argument("integrator boundary_clip must be non-negative");
  }
  if (n > 0 && boundary_clip >= 1.0 / static_cast<double>(n)) {
    throw std::invalid_argument("integrator boundary_clip must stay below 1/n");
  }
}

Eigen::Index IntegratorConfig::step_count() const {
  return static_cast<Eigen::Index>(std::llround(t_max / dt));
}

Eigen::VectorXd replicator_field(const PayoffMatrix& a, const PopulationState& x) {
  require_square_match(a, x);
  return field_raw(a.entries(), x.freqs());
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> asymmetric_field(const AsymmetricGame& g,
                                                             const PopulationState& x,
                                                             const PopulationState& y,
                                                             AsymmetricIndexing indexing) {
  if (g.a.rows() != x.size() || g.a.cols() != y.size()) {
    throw std::invalid_argument("population states do not match the two-population game shape");
  }
  return {growth_factors(g.a.entries(), x.freqs(), y.freqs(), indexing),
          growth_factors(g.b.entries(), y.freqs(), x.freqs(), indexing)};
}

Trajectory integrate(const PayoffMatrix& a, const PopulationState& x0,
                     const IntegratorConfig& cfg) {
  require_square_match(a, x0);
  cfg.validate(x0.size());

  const Eigen::MatrixXd& m = a.entries();
  const auto field = [&m](const Eigen::VectorXd& v) { return field_raw(m, v); };
  const Eigen::Index steps = cfg.step_count();

  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.observables.reserve(steps + 1);

  Eigen::VectorXd x = x0.freqs();
  for (Eigen::Index k = 0;; ++k) {
    traj.times.push_back(k * cfg.dt);
    traj.states.push_back(PopulationState::renormalized(x));
    traj.observables.push_back({x.dot(m * x), shannon_entropy(x)});
    if (k == steps) break;

    x = advance(field, x, cfg);
    project_to_simplex(x, cfg);
    check_finite(x, k + 1, (k + 1) * cfg.dt);
  }
  return traj;
}

std::pair<Trajectory, Trajectory> integrate_asymmetric(const AsymmetricGame& g,
                                                       const PopulationState& x0,
                                                       const PopulationState& y0,
                                                       const IntegratorConfig& cfg,
                                                       AsymmetricIndexing indexing) {
  if (g.a.rows() != x0.size() || g.a.cols() != y0.size()) {
    throw std::invalid_argument("population states do not match the two-population game shape");
  }
  cfg.validate(std::max(x0.size(), y0.size()));

  const Eigen::Index n = x0.size();
  const Eigen::Index steps = cfg.step_count();

  // Both populations advance as one stacked state so RK4 stages stay in sync.
  const auto field = [&g, n, indexing](const Eigen::VectorXd& z) {
    Eigen::VectorXd out(z.size());
    out.head(n) = growth_factors(g.a.entries(), z.head(n), z.tail(z.size() - n), indexing);
    out.tail(z.size() - n) =
        growth_factors(g.b.entries(), z.tail(z.size() - n), z.head(n), indexing);
    return out;
  };

  Trajectory ta;
  Trajectory tb;
  Eigen::VectorXd z(x0.size() + y0.size());
  z.head(n) = x0.freqs();
  z.tail(y0.size()) = y0.freqs();

  for (Eigen::Index k = 0;; ++k) {
    const double t = k * cfg.dt;
    Eigen::VectorXd x = z.head(n);
    Eigen::VectorXd y = z.tail(z.size() - n);
    ta.times.push_back(t);
    ta.states.push_back(PopulationState::renormalized(x));
    ta.observables.push_back({x.dot(g.a.entries() * y), shannon_entropy(x)});
    tb.times.push_back(t);
    tb.states.push_back(PopulationState::renormalized(y));
    tb.observables.push_back({y.dot(g.b.entries() * x), shannon_entropy(y)});
    if (k == steps) break;

    z = advance(field, z, cfg);
    Eigen::VectorXd xn = z.head(n);
    Eigen::VectorXd yn = z.tail(z.size() - n);
    project_to_simplex(xn, cfg);
    project_to_simplex(yn, cfg);
    z.head(n) = xn;
    z.tail(z.size() - n) = yn;
    check_finite(z, k + 1, (k + 1) * cfg.dt);
  }
  return {std::move(ta), std::move(tb)};
}

FixedPointReport find_fixed_point(const PayoffMatrix& a, const PopulationState& guess,
                                  double tol) {
  require_square_match(a, guess);
  if (!(tol > 0.0)) throw std::invalid_argument("fixed-point tolerance must be positive");

  const Eigen::MatrixXd& m = a.entries();
  const Eigen::Index n = guess.size();
  constexpr int kMaxIterations = 200;
  constexpr double kFdStep = 1e-6;

  // The field sums to zero, so the search runs in the first n-1 coordinates
  // with the last frequency eliminated.
  const auto embed = [n](const Eigen::VectorXd& u) {
    Eigen::VectorXd x(n);
    x.head(n - 1) = u;
    x(n - 1) = 1.0 - u.sum();
    return x;
  };
  const auto reduced = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    return field_raw(m, embed(u)).head(n - 1);
  };

  Eigen::VectorXd u = guess.freqs().head(n - 1);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const Eigen::VectorXd full = field_raw(m, embed(u));
    if (full.lpNorm<Eigen::Infinity>() < tol) {
      const Eigen::VectorXd xs = embed(u);
      if (xs.minCoeff() < -1e-6) {
        throw NumericalError("fixed-point search converged outside the simplex");
      }

      // Stability from the full-space Jacobian restricted to the tangent space.
      Eigen::MatrixXd jac(n, n);
      for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXd hi = xs;
        Eigen::VectorXd lo = xs;
        hi(j) += kFdStep;
        lo(j) -= kFdStep;
        jac.col(j) = (field_raw(m, hi) - field_raw(m, lo)) / (2.0 * kFdStep);
      }
      const Eigen::MatrixXd basis = sum_zero_basis(n);
      const Eigen::MatrixXd reduced_jac = basis.transpose() * jac * basis;
      const Eigen::EigenSolver<Eigen::MatrixXd> es(reduced_jac);

      FixedPointReport report{PopulationState::renormalized(xs),
                              full.lpNorm<Eigen::Infinity>(),
                              {},
                              Stability::marginal};
      double max_real = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        report.jacobian_eigenvalues.push_back(es.eigenvalues()(i));
        max_real = std::max(max_real, es.eigenvalues()(i).real());
      }
      constexpr double kMarginBand = 1e-7;
      if (max_real < -kMarginBand) {
        report.stability = Stability::stable;
      } else if (max_real > kMarginBand) {
        report.stability = Stability::unstable;
      }
      return report;
    }

    const Eigen::VectorXd residual = reduced(u);
    Eigen::MatrixXd jac(n - 1, n - 1);
    for (Eigen::Index j = 0; j < n - 1; ++j) {
      Eigen::VectorXd hi = u;
      Eigen::VectorXd lo = u;
      hi(j) += kFdStep;
      lo(j) -= kFdStep;
      jac.col(j) = (reduced(hi) - reduced(lo)) / (2.0 * kFdStep);
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    const Eigen::VectorXd delta =
        lu.isInvertible() ? lu.solve(-residual).eval()
                          : jac.completeOrthogonalDecomposition().solve(-residual).eval();

    // Damping: halve until the residual shrinks, then take the best step.
    const double base = residual.lpNorm<Eigen::Infinity>();
    double lambda = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 9; ++halving) {
      if (reduced(u + lambda * delta).lpNorm<Eigen::Infinity>() < base) {
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    u += (improved ? lambda : lambda * 0.5) * delta;
    if (!u.allFinite()) throw NumericalError("fixed-point search diverged");
  }
  throw NumericalError("fixed-point search did not converge within 200 iterations");
}

}  // namespace replidyn
