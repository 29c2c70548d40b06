"""End-to-end smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import replidyn as rd

HAWK_DOVE = np.array([[-1.0, 2.0], [0.0, 1.0]])
PRISONERS_DILEMMA = np.array([[3.0, 0.0], [5.0, 1.0]])
RPS = np.array([[0.0, -1.0, 1.0], [1.0, 0.0, -1.0], [-1.0, 1.0, 0.0]])


def test_fitness_and_average():
    x = np.array([0.5, 0.5])
    assert rd.fitness(PRISONERS_DILEMMA, x, 0) == pytest.approx(1.5)
    assert rd.fitness(PRISONERS_DILEMMA, x, 1) == pytest.approx(3.0)
    assert rd.average_fitness(PRISONERS_DILEMMA, x) == pytest.approx(2.25)


def test_simplex_validation():
    with pytest.raises(ValueError):
        rd.fitness(PRISONERS_DILEMMA, np.array([0.5, 0.6]), 0)


def test_hawk_dove_convergence():
    traj = rd.integrate(HAWK_DOVE, np.array([0.1, 0.9]), dt=0.01, t_max=100.0)
    assert traj.states[-1, 0] == pytest.approx(0.5, abs=1e-6)
    assert traj.times[-1] == pytest.approx(100.0)
    assert len(traj) == 10001


def test_matrix_engine_matches_vector_engine():
    x0 = np.array([0.2, 0.3, 0.5])
    vec = rd.integrate(RPS, x0, dt=0.01, t_max=5.0)
    mat = rd.integrate_matrix(RPS, x0, dt=0.01, t_max=5.0)
    diag = np.array([m.diagonal() for m in mat.states])
    assert np.max(np.abs(diag - vec.states)) < 1e-6
    assert mat.max_trace_drift() < 1e-9


def test_matrix_field_diagonal_is_vector_field():
    x = np.array([0.25, 0.75])
    field = rd.matrix_replicator_field(HAWK_DOVE, rd.frequency_matrix(x))
    assert np.allclose(field.diagonal(), rd.replicator_field(HAWK_DOVE, x), atol=1e-14)


def test_decomposition_residuals():
    report = rd.verify_decomposition(HAWK_DOVE, np.array([0.25, 0.75]))
    assert report.max_residual() < 1e-12


def test_equilibria_classification():
    scan = rd.find_equilibria(RPS)
    interior = [r for r in scan.equilibria if len(r.support) == 3]
    assert len(interior) == 1
    assert interior[0].nash and not interior[0].ess
    assert np.allclose(interior[0].state, 1.0 / 3.0)
    assert len(scan.singular_supports) == 3

    verdict = rd.is_nash(PRISONERS_DILEMMA, np.array([0.0, 1.0]))
    assert verdict.nash and verdict.strict
    assert rd.is_ess(PRISONERS_DILEMMA, np.array([0.0, 1.0]))


def test_fixed_point_stability():
    report = rd.find_fixed_point(HAWK_DOVE, np.array([0.4, 0.6]))
    assert report.stability == "stable"
    assert report.state[0] == pytest.approx(0.5, abs=1e-8)


def test_entropy_anchors():
    assert rd.von_neumann_entropy(rd.maximally_mixed(4)) == pytest.approx(math.log(4.0))
    assert rd.von_neumann_entropy(rd.density_from_state(np.array([0.2, 0.8]))) == (
        pytest.approx(0.0, abs=1e-10)
    )
    assert rd.shannon_entropy(np.array([0.5, 0.5])) == pytest.approx(math.log(2.0))


def test_gibbs_state():
    h = np.diag([0.0, 1.0]).astype(complex)
    assert rd.partition_function(h, 1.0) == pytest.approx(1.3678794411714423)
    rho = rd.gibbs_state(h, 1.0)
    assert rho[0, 0].real == pytest.approx(0.7310585786300049)
    assert rho[1, 1].real == pytest.approx(0.2689414213699951)


def test_rabi_oscillation():
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    rho0 = np.diag([1.0, 0.0]).astype(complex)
    t_max = math.pi / 4.0
    traj = rd.integrate_von_neumann(rho0, dt=t_max / 100.0, t_max=t_max, hamiltonian=sx)
    assert traj.states[-1][0, 0].real == pytest.approx(0.5, abs=1e-8)


def test_state_hamiltonian_energy_flag():
    game = np.diag([2.0, 3.0])
    sh = rd.hamiltonian_from_state(game, np.diag([0.5, 0.5]).astype(complex))
    assert not sh.idempotent
    assert sh.average_energy == pytest.approx(0.3125j)
    vertex = rd.hamiltonian_from_state(game, np.diag([1.0, 0.0]).astype(complex))
    assert vertex.idempotent
    assert abs(vertex.average_energy) < 1e-15


def test_random_game_determinism():
    a = rd.random_game(3, 42)
    b = rd.random_game(3, 42)
    assert np.array_equal(a, b)
    assert np.abs(a).max() <= 1.0


def test_numerical_error_is_arithmetic_error():
    deep = np.diag([-1e6, 0.0]).astype(complex)
    with pytest.raises(ArithmeticError):
        rd.partition_function(deep, 1e3)
