#pragma once

#include "replidyn/game.hpp"
#include "replidyn/replicator.hpp"

#include <vector>

namespace replidyn {

// Symmetric square-root outer product of a population state,
//   X_ij = (x_i x_j)^{1/2}.
// Unit trace, idempotent, rank one; the diagonal carries the frequencies.
class FrequencyMatrix {
 public:
  static FrequencyMatrix from_state(const PopulationState& x);

  // Validates an externally supplied matrix: symmetric, entries >= -tol,
  // trace and idempotency residual within tol.
  static FrequencyMatrix from_matrix(const Eigen::MatrixXd& m, double tol = 1e-8);

  const Eigen::MatrixXd& entries() const { return x_; }
  Eigen::Index size() const { return x_.rows(); }

  // Diagonal as a population state (clipped and renormalized).
  PopulationState diagonal_state() const;

 private:
  explicit FrequencyMatrix(Eigen::MatrixXd x) : x_(std::move(x)) {}

  Eigen::MatrixXd x_;
};

// Diagonal growth-rate operator U with u_ii = f_i(x) - <f(x)>, so the
// replicator equation reads dx/dt = U x.
Eigen::MatrixXd growth_rate_matrix(const PayoffMatrix& a, const PopulationState& x);

// Diagonal operator Q with q_ii = f_i(x) / 2; the commutator [Q, X]
// generates the matrix flow.
Eigen::MatrixXd half_fitness_diagonal(const PayoffMatrix& a, const PopulationState& x);

// Antisymmetric, traceless generator Lambda = [Q, X] of the matrix flow,
// with entries (f_i - f_j) (x_i x_j)^{1/2} / 2.
class SelectionOperator {
 public:
  explicit SelectionOperator(Eigen::MatrixXd lambda);

  const Eigen::MatrixXd& entries() const { return lambda_; }
  Eigen::Index size() const { return lambda_.rows(); }

 private:
  Eigen::MatrixXd lambda_;
};

SelectionOperator selection_generator(const PayoffMatrix& a, const PopulationState& x);

// Commutator form of the replicator flow, dX/dt = [[Q, X], X]. The result is
// symmetric and traceless and its diagonal reproduces the vector field.
Eigen::MatrixXd matrix_replicator_field(const PayoffMatrix& a, const FrequencyMatrix& x);

// Max-abs residuals of the algebraic chain tying the velocity outer product
// G = v xhat^T / 2 (v_i = xdot_i / sqrt(x_i), xhat_i = sqrt(x_i)) to the
// commutator field.
struct DecompositionReport {
  double growth_outer = 0.0;  // G vs U xhat xhat^T / 2
  double product_g1 = 0.0;    // Q X vs its element formula
  double product_g2 = 0.0;    // X Q vs its element formula
  double product_g3 = 0.0;    // 2 X Q X vs its element formula
  double assembly = 0.0;      // G + G^T vs G1 + G2 - G3
  double field = 0.0;         // G + G^T vs [[Q, X], X]

  double max_residual() const;
};

// Evaluates the decomposition identities at a strictly interior state (every
// frequency above 1e-12); the velocity rescaling divides by sqrt(x_i), so
// boundary states are a domain error.
DecompositionReport verify_decomposition(const PayoffMatrix& a, const PopulationState& x);

enum class MatrixProjection { diagonal_rebuild, none };

struct MatrixTrajectory {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> states;
  std::vector<StepObservables> observables;
  std::vector<double> trace_drift;        // |Tr X - 1| per stored step
  std::vector<double> idempotency_drift;  // max-abs of X^2 - X per stored step

  double max_trace_drift() const;
  double max_idempotency_drift() const;
};

// Integrates dX/dt = [[Q, X], X]. With diagonal_rebuild the diagonal is
// clipped, renormalized and X rebuilt from it after every step; with none the
// raw matrix is kept and invariant drift is only recorded.
MatrixTrajectory integrate_matrix(const PayoffMatrix& a, const FrequencyMatrix& x0,
                                  const IntegratorConfig& cfg,
                                  MatrixProjection projection = MatrixProjection::diagonal_rebuild);

}  // namespace replidyn
