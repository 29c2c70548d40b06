#include "replidyn/matrix_form.hpp"

#include "replidyn/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace replidyn;

namespace {

PayoffMatrix hawk_dove() {
  Eigen::MatrixXd m(2, 2);
  m << -1.0, 2.0, 0.0, 1.0;
  return PayoffMatrix(m);
}

PayoffMatrix rock_paper_scissors() {
  Eigen::MatrixXd m(3, 3);
  m << 0.0, -1.0, 1.0,
       1.0, 0.0, -1.0,
      -1.0, 1.0, 0.0;
  return PayoffMatrix(m);
}

PopulationState state2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return PopulationState(v);
}

PopulationState random_interior(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v(i) = 0.1 + u;
  }
  v /= v.sum();
  return PopulationState(v);
}

IntegratorConfig config(double dt, double t_max) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.t_max = t_max;
  return cfg;
}

}  // namespace

TEST_CASE("frequency matrix construction") {
  const FrequencyMatrix x = FrequencyMatrix::from_state(state2(0.25, 0.75));
  const Eigen::MatrixXd& m = x.entries();
  CHECK(std::abs(m(0, 0) - 0.25) <= 1e-15);
  CHECK(std::abs(m(1, 1) - 0.75) <= 1e-15);
  CHECK(std::abs(m(0, 1) - 0.4330127018922193) <= 1e-15);
  CHECK(m(0, 1) == m(1, 0));
  CHECK(std::abs(m.trace() - 1.0) <= 1e-15);
  CHECK((m * m - m).lpNorm<Eigen::Infinity>() <= 1e-15);

  const PopulationState diag = x.diagonal_state();
  CHECK(std::abs(diag[0] - 0.25) <= 1e-15);
}

TEST_CASE("frequency matrix properties hold on random states") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 4);
    const FrequencyMatrix x = FrequencyMatrix::from_state(random_interior(n, rng));
    const Eigen::MatrixXd& m = x.entries();
    CHECK(std::abs(m.trace() - 1.0) <= 1e-12);
    CHECK((m - m.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((m * m - m).lpNorm<Eigen::Infinity>() <= 1e-10);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-10);
    // Rank one: every eigenvalue except the top one vanishes.
    for (Eigen::Index i = 0; i + 1 < n; ++i) CHECK(std::abs(es.eigenvalues()(i)) <= 1e-10);
  }
}

TEST_CASE("frequency matrix validation rejects bad inputs") {
  Eigen::MatrixXd asym(2, 2);
  asym << 0.5, 0.3, 0.2, 0.5;
  CHECK_THROWS_AS(FrequencyMatrix::from_matrix(asym), std::invalid_argument);

  Eigen::MatrixXd negative(2, 2);
  negative << 1.2, -0.3, -0.3, -0.2;
  CHECK_THROWS_AS(FrequencyMatrix::from_matrix(negative), std::invalid_argument);

  Eigen::MatrixXd off_trace = FrequencyMatrix::from_state(state2(0.25, 0.75)).entries() * 1.01;
  CHECK_THROWS_AS(FrequencyMatrix::from_matrix(off_trace), std::invalid_argument);

  Eigen::MatrixXd mixed = Eigen::MatrixXd::Identity(2, 2) * 0.5;  // trace 1, not idempotent
  CHECK_THROWS_AS(FrequencyMatrix::from_matrix(mixed), std::invalid_argument);

  CHECK_NOTHROW(FrequencyMatrix::from_matrix(
      FrequencyMatrix::from_state(state2(0.25, 0.75)).entries()));
}

TEST_CASE("growth-rate and half-fitness diagonals at the Hawk-Dove point") {
  const PayoffMatrix a = hawk_dove();
  const PopulationState x = state2(0.25, 0.75);

  const Eigen::MatrixXd u = growth_rate_matrix(a, x);
  CHECK(std::abs(u(0, 0) - 0.375) <= 1e-15);
  CHECK(std::abs(u(1, 1) + 0.125) <= 1e-15);
  CHECK(u(0, 1) == 0.0);

  const Eigen::MatrixXd q = half_fitness_diagonal(a, x);
  CHECK(std::abs(q(0, 0) - 0.625) <= 1e-15);
  CHECK(std::abs(q(1, 1) - 0.375) <= 1e-15);

  // dx/dt = U x reproduces the vector field.
  const Eigen::VectorXd via_u = u * x.freqs();
  const Eigen::VectorXd direct = replicator_field(a, x);
  CHECK((via_u - direct).lpNorm<Eigen::Infinity>() <= 1e-15);
}

TEST_CASE("selection generator is antisymmetric with the closed-form entries") {
  const PayoffMatrix a = hawk_dove();
  const PopulationState x = state2(0.25, 0.75);
  const SelectionOperator lambda = selection_generator(a, x);
  const Eigen::MatrixXd& l = lambda.entries();
  CHECK(std::abs(l(0, 1) - 0.10825317547305482) <= 1e-15);
  CHECK(std::abs(l(0, 1) + l(1, 0)) <= 1e-15);
  CHECK(l(0, 0) == 0.0);
  CHECK(l(1, 1) == 0.0);
  CHECK(std::abs(l.trace()) <= 1e-15);

  CHECK_THROWS_AS(SelectionOperator(Eigen::MatrixXd::Identity(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("matrix field diagonal matches the vector field") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 3);
    const PayoffMatrix a = random_game(n, rng());
    const PopulationState x = random_interior(n, rng);
    const Eigen::MatrixXd field = matrix_replicator_field(a, FrequencyMatrix::from_state(x));
    CHECK((field - field.transpose()).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(std::abs(field.trace()) <= 1e-12);
    CHECK((field.diagonal() - replicator_field(a, x)).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("matrix field off-diagonal entries match the element formula") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 3);
    const PayoffMatrix a = random_game(n, rng());
    const PopulationState x = random_interior(n, rng);
    const Eigen::MatrixXd field = matrix_replicator_field(a, FrequencyMatrix::from_state(x));

    const Eigen::VectorXd f = a.entries() * x.freqs();
    const double avg = x.freqs().dot(f);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double expected =
            (0.5 * (f(i) + f(j)) - avg) * std::sqrt(x[i] * x[j]);
        CHECK(std::abs(field(i, j) - expected) <= 1e-12);
      }
    }
  }
}

TEST_CASE("decomposition chain holds at interior states") {
  const DecompositionReport at_point = verify_decomposition(hawk_dove(), state2(0.25, 0.75));
  CHECK(at_point.max_residual() <= 1e-12);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 4);
    const PayoffMatrix a = random_game(n, rng());
    const PopulationState x = random_interior(n, rng);
    CHECK(verify_decomposition(a, x).max_residual() <= 1e-10);
  }
}

TEST_CASE("decomposition rejects boundary states") {
  CHECK_THROWS_AS(verify_decomposition(hawk_dove(), PopulationState::pure(2, 0)),
                  std::domain_error);
}

TEST_CASE("projected matrix integration tracks the vector engine") {
  const PayoffMatrix a = hawk_dove();
  const PopulationState x0 = state2(0.25, 0.75);
  const IntegratorConfig cfg = config(0.01, 5.0);

  const Trajectory vec = integrate(a, x0, cfg);
  const MatrixTrajectory mat =
      integrate_matrix(a, FrequencyMatrix::from_state(x0), cfg);

  REQUIRE(vec.states.size() == mat.states.size());
  double worst_diag = 0.0;
  double worst_off = 0.0;
  for (std::size_t k = 0; k < vec.states.size(); ++k) {
    const Eigen::VectorXd& x = vec.states[k].freqs();
    worst_diag = std::max(
        worst_diag, (mat.states[k].diagonal() - x).lpNorm<Eigen::Infinity>());
    worst_off = std::max(worst_off,
                         std::abs(mat.states[k](0, 1) - std::sqrt(x(0) * x(1))));
  }
  CHECK(worst_diag <= 1e-6);
  CHECK(worst_off <= 1e-6);
  CHECK(mat.max_trace_drift() <= 1e-9);
}

TEST_CASE("unprojected integration conserves the trace and reports drift") {
  const PayoffMatrix a = rock_paper_scissors();
  Eigen::VectorXd v(3);
  v << 0.2, 0.3, 0.5;
  const MatrixTrajectory mat =
      integrate_matrix(a, FrequencyMatrix::from_state(PopulationState(v)),
                       config(0.01, 20.0), MatrixProjection::none);
  CHECK(mat.max_trace_drift() <= 1e-12);  // commutator increments are traceless
  CHECK(mat.idempotency_drift.size() == mat.states.size());
  CHECK(mat.max_idempotency_drift() >= 0.0);
  CHECK(mat.max_idempotency_drift() <= 1e-3);
}

TEST_CASE("matrix trajectory observables follow the diagonal") {
  const PayoffMatrix a = hawk_dove();
  const MatrixTrajectory mat =
      integrate_matrix(a, FrequencyMatrix::from_state(state2(0.25, 0.75)), config(0.1, 2.0));
  for (std::size_t k = 0; k < mat.states.size(); ++k) {
    const Eigen::VectorXd d = mat.states[k].diagonal();
    CHECK(std::abs(mat.observables[k].average_fitness - d.dot(a.entries() * d)) <= 1e-12);
  }
}
