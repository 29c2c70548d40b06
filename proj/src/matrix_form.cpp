#include "replidyn/matrix_form.hpp"

#include "replidyn/numeric.hpp"
#include "stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace replidyn {

namespace {

constexpr double kInteriorFloor = 1e-12;

void require_square_match(const PayoffMatrix& a, Eigen::Index n) {
  if (!a.square()) throw std::invalid_argument("payoff matrix must be square");
  if (a.rows() != n) {
    throw std::invalid_argument("payoff matrix and state dimensions differ");
  }
}

Eigen::VectorXd fitness_vector(const PayoffMatrix& a, const PopulationState& x) {
  require_square_match(a, x.size());
  return a.entries() * x.freqs();
}

// dX/dt = [[Q, X], X] with Q rebuilt from the current diagonal; defined for
// any square matrix so the integrator can evaluate intermediate stages.
Eigen::MatrixXd matrix_field_raw(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m) {
  const Eigen::VectorXd f = a * m.diagonal();
  const Eigen::MatrixXd q = (0.5 * f).asDiagonal();
  const Eigen::MatrixXd lambda = q * m - m * q;
  return lambda * m - m * lambda;
}

}  // namespace

FrequencyMatrix FrequencyMatrix::from_state(const PopulationState& x) {
  const Eigen::VectorXd root = x.freqs().cwiseSqrt();
  return FrequencyMatrix(root * root.transpose());
}

FrequencyMatrix FrequencyMatrix::from_matrix(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols() || m.size() == 0) {
    throw std::invalid_argument("frequency matrix must be square and non-empty");
  }
  if (!m.allFinite()) throw std::invalid_argument("frequency matrix entries must be finite");
  if ((m - m.transpose()).lpNorm<Eigen::Infinity>() > 1e-12) {
    throw std::invalid_argument("frequency matrix must be symmetric");
  }
  if (m.minCoeff() < -tol) {
    throw std::invalid_argument("frequency matrix entries must be non-negative");
  }
  if (std::abs(m.trace() - 1.0) > tol) {
    throw std::invalid_argument("frequency matrix trace must equal 1");
  }
  if ((m * m - m).lpNorm<Eigen::Infinity>() > tol) {
    throw std::invalid_argument("frequency matrix must be idempotent (X^2 = X)");
  }
  return FrequencyMatrix(m);
}

PopulationState FrequencyMatrix::diagonal_state() const {
  return PopulationState::renormalized(x_.diagonal());
}

Eigen::MatrixXd growth_rate_matrix(const PayoffMatrix& a, const PopulationState& x) {
  const Eigen::VectorXd f = fitness_vector(a, x);
  const double avg = x.freqs().dot(f);
  return Eigen::MatrixXd((f.array() - avg).matrix().asDiagonal());
}

Eigen::MatrixXd half_fitness_diagonal(const PayoffMatrix& a, const PopulationState& x) {
  return Eigen::MatrixXd((0.5 * fitness_vector(a, x)).asDiagonal());
}

SelectionOperator::SelectionOperator(Eigen::MatrixXd lambda) : lambda_(std::move(lambda)) {
  if (lambda_.rows() != lambda_.cols()) {
    throw std::invalid_argument("selection operator must be square");
  }
  if ((lambda_ + lambda_.transpose()).lpNorm<Eigen::Infinity>() > 1e-12) {
    throw std::invalid_argument("selection operator must be antisymmetric");
  }
}

SelectionOperator selection_generator(const PayoffMatrix& a, const PopulationState& x) {
  const Eigen::MatrixXd q = half_fitness_diagonal(a, x);
  const Eigen::MatrixXd xm = FrequencyMatrix::from_state(x).entries();
  return SelectionOperator(q * xm - xm * q);
}

Eigen::MatrixXd matrix_replicator_field(const PayoffMatrix& a, const FrequencyMatrix& x) {
  require_square_match(a, x.size());
  return matrix_field_raw(a.entries(), x.entries());
}

double DecompositionReport::max_residual() const {
  return std::max({growth_outer, product_g1, product_g2, product_g3, assembly, field});
}

DecompositionReport verify_decomposition(const PayoffMatrix& a, const PopulationState& x) {
  require_square_match(a, x.size());
  const Eigen::Index n = x.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x[i] < kInteriorFloor) {
      throw std::domain_error(
          "decomposition check needs a strictly interior state: the velocity "
          "rescaling divides by sqrt(x_i)");
    }
  }

  const Eigen::VectorXd& xv = x.freqs();
  const Eigen::VectorXd f = a.entries() * xv;
  const double avg = xv.dot(f);
  const Eigen::VectorXd xdot = ((f.array() - avg) * xv.array()).matrix();
  const Eigen::VectorXd xhat = xv.cwiseSqrt();
  const Eigen::VectorXd v = xdot.cwiseQuotient(xhat);

  const Eigen::MatrixXd g = 0.5 * v * xhat.transpose();
  const Eigen::MatrixXd u = growth_rate_matrix(a, x);
  const Eigen::MatrixXd q = half_fitness_diagonal(a, x);
  const Eigen::MatrixXd xm = xhat * xhat.transpose();

  const Eigen::MatrixXd g1 = q * xm;
  const Eigen::MatrixXd g2 = xm * q;
  const Eigen::MatrixXd g3 = 2.0 * xm * q * xm;

  // Element formulas evaluated independently of the matrix products.
  Eigen::MatrixXd e1(n, n);
  Eigen::MatrixXd e2(n, n);
  Eigen::MatrixXd e3(n, n);
  double mean = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    double fk = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) fk += a(k, l) * xv(l);
    mean += fk * xv(k);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double fi = 0.0;
      double fj = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        fi += a(i, k) * xv(k);
        fj += a(j, k) * xv(k);
      }
      const double root = std::sqrt(xv(i) * xv(j));
      e1(i, j) = 0.5 * fi * root;
      e2(i, j) = 0.5 * root * fj;
      e3(i, j) = mean * root;
    }
  }

  DecompositionReport report;
  report.growth_outer = (g - 0.5 * u * xm).lpNorm<Eigen::Infinity>();
  report.product_g1 = (g1 - e1).lpNorm<Eigen::Infinity>();
  report.product_g2 = (g2 - e2).lpNorm<Eigen::Infinity>();
  report.product_g3 = (g3 - e3).lpNorm<Eigen::Infinity>();
  const Eigen::MatrixXd sym = g + g.transpose();
  report.assembly = (sym - (g1 + g2 - g3)).lpNorm<Eigen::Infinity>();
  report.field = (sym - matrix_field_raw(a.entries(), xm)).lpNorm<Eigen::Infinity>();
  return report;
}

double MatrixTrajectory::max_trace_drift() const {
  return trace_drift.empty() ? 0.0
                             : *std::max_element(trace_drift.begin(), trace_drift.end());
}

double MatrixTrajectory::max_idempotency_drift() const {
  return idempotency_drift.empty()
             ? 0.0
             : *std::max_element(idempotency_drift.begin(), idempotency_drift.end());
}

MatrixTrajectory integrate_matrix(const PayoffMatrix& a, const FrequencyMatrix& x0,
                                  const IntegratorConfig& cfg, MatrixProjection projection) {
  require_square_match(a, x0.size());
  cfg.validate(x0.size());

  const Eigen::MatrixXd& payoff = a.entries();
  const auto field = [&payoff](const Eigen::MatrixXd& m) {
    return matrix_field_raw(payoff, m);
  };
  const Eigen::Index steps = cfg.step_count();

  MatrixTrajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);

  Eigen::MatrixXd m = x0.entries();
  for (Eigen::Index k = 0;; ++k) {
    const Eigen::VectorXd d = m.diagonal();
    traj.times.push_back(k * cfg.dt);
    traj.states.push_back(m);
    traj.observables.push_back({d.dot(payoff * d), shannon_entropy(d)});
    traj.trace_drift.push_back(std::abs(m.trace() - 1.0));
    traj.idempotency_drift.push_back((m * m - m).lpNorm<Eigen::Infinity>());
    if (k == steps) break;

    m = cfg.method == Method::rk4_fixed ? detail::rk4_step(field, m, cfg.dt)
                                        : detail::euler_step(field, m, cfg.dt);
    if (projection == MatrixProjection::diagonal_rebuild) {
      Eigen::VectorXd diag = m.diagonal().cwiseMax(cfg.boundary_clip).cwiseMin(1.0);
      const double sum = diag.sum();
      if (!(sum > 0.0)) throw NumericalError("population mass vanished during integration");
      diag /= sum;
      const Eigen::VectorXd root = diag.cwiseSqrt();
      m = root * root.transpose();
    }
    if (!m.allFinite()) {
      throw NumericalError("integration produced a non-finite state at step " +
                           std::to_string(k + 1) + " (t = " + std::to_string((k + 1) * cfg.dt) +
                           ")");
    }
  }
  return traj;
}

}  // namespace replidyn
