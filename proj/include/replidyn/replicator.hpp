#pragma once

#include "replidyn/game.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace replidyn {

enum class Method { rk4_fixed, euler };

// Fixed-step integrator settings shared by the vector, matrix and density
// engines.
struct IntegratorConfig {
  double dt = 0.01;
  double t_max = 50.0;
  Method method = Method::rk4_fixed;
  // Lower clamp applied to every frequency after a step (0 clips plain
  // negatives). Must stay below 1/n so clamping cannot leave the simplex.
  double boundary_clip = 0.0;
  bool renormalize_each_step = true;

  void validate(Eigen::Index n) const;
  Eigen::Index step_count() const;
};

struct StepObservables {
  double average_fitness = 0.0;
  double entropy = 0.0;  // Shannon entropy of the frequencies, nats
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PopulationState> states;
  std::vector<StepObservables> observables;
};

enum class Stability { stable, unstable, marginal };

struct FixedPointReport {
  PopulationState state;
  double residual = 0.0;
  // Spectrum of the field's Jacobian restricted to the simplex tangent space.
  std::vector<std::complex<double>> jacobian_eigenvalues;
  Stability stability = Stability::marginal;
};

// Right-hand side of the replicator equation
//   dx_i/dt = [f_i(x) - <f(x)>] x_i,  f(x) = A x,  <f(x)> = x^T A x.
Eigen::VectorXd replicator_field(const PayoffMatrix& a, const PopulationState& x);

// Which strategy's payoff drives each component of the two-population field.
// per_strategy is the standard reading; first_component applies the first
// strategy's payoff to every component and is kept only for comparison.
enum class AsymmetricIndexing { per_strategy, first_component };

// Two-population fields
//   dx_i/dt = [(A y)_i - x^T A y] x_i,   dy_j/dt = [(B x)_j - y^T B x] y_j.
std::pair<Eigen::VectorXd, Eigen::VectorXd> asymmetric_field(
    const AsymmetricGame& g, const PopulationState& x, const PopulationState& y,
    AsymmetricIndexing indexing = AsymmetricIndexing::per_strategy);

// Integrates the replicator flow with the configured fixed-step scheme.
// After every step frequencies below the clip level are raised to it and the
// state renormalized (when enabled); a non-finite state aborts with the step.
Trajectory integrate(const PayoffMatrix& a, const PopulationState& x0,
                     const IntegratorConfig& cfg);

std::pair<Trajectory, Trajectory> integrate_asymmetric(
    const AsymmetricGame& g, const PopulationState& x0, const PopulationState& y0,
    const IntegratorConfig& cfg,
    AsymmetricIndexing indexing = AsymmetricIndexing::per_strategy);

// Damped Newton search for a rest point of the replicator field restricted
// to the simplex. Jacobian eigenvalues come from central finite differences
// (step 1e-6) projected on the tangent space; the largest real part decides
// stability with a +/-1e-7 marginal band. Throws NumericalError after 200
// iterations without convergence.
FixedPointReport find_fixed_point(const PayoffMatrix& a, const PopulationState& guess,
                                  double tol = kDefaultTol);

}  // namespace replidyn
