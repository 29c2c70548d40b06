"""Evolutionary game dynamics: replicator flows, their commutator matrix form,
and density-operator evolution."""

from ._core import (
    DecompositionReport,
    DensityTrajectory,
    EquilibriumReport,
    EquilibriumScan,
    FixedPointReport,
    MatrixTrajectory,
    NashVerdict,
    NumericalError,
    StateHamiltonian,
    TraceIdentityReport,
    Trajectory,
    asymmetric_field,
    average_fitness,
    best_replies,
    coherence,
    default_mutant_grid,
    density_from_ensemble,
    density_from_pure,
    density_from_state,
    expectation,
    find_equilibria,
    find_fixed_point,
    fitness,
    frequency_matrix,
    gibbs_state,
    growth_rate_matrix,
    half_fitness_diagonal,
    hamiltonian_from_state,
    integrate,
    integrate_asymmetric,
    integrate_matrix,
    integrate_von_neumann,
    is_ess,
    is_nash,
    matrix_replicator_field,
    maximally_mixed,
    partition_function,
    purity,
    quantized_average_fitness,
    quantized_fitness,
    random_game,
    replicator_field,
    selection_generator,
    shannon_entropy,
    simplex_lattice,
    support,
    trace_fitness_identities,
    verify_decomposition,
    von_neumann_entropy,
    von_neumann_field,
)

__all__ = [
    "DecompositionReport",
    "DensityTrajectory",
    "EquilibriumReport",
    "EquilibriumScan",
    "FixedPointReport",
    "MatrixTrajectory",
    "NashVerdict",
    "NumericalError",
    "StateHamiltonian",
    "TraceIdentityReport",
    "Trajectory",
    "asymmetric_field",
    "average_fitness",
    "best_replies",
    "coherence",
    "default_mutant_grid",
    "density_from_ensemble",
    "density_from_pure",
    "density_from_state",
    "expectation",
    "find_equilibria",
    "find_fixed_point",
    "fitness",
    "frequency_matrix",
    "gibbs_state",
    "growth_rate_matrix",
    "half_fitness_diagonal",
    "hamiltonian_from_state",
    "integrate",
    "integrate_asymmetric",
    "integrate_matrix",
    "integrate_von_neumann",
    "is_ess",
    "is_nash",
    "matrix_replicator_field",
    "maximally_mixed",
    "partition_function",
    "purity",
    "quantized_average_fitness",
    "quantized_fitness",
    "random_game",
    "replicator_field",
    "selection_generator",
    "shannon_entropy",
    "simplex_lattice",
    "support",
    "trace_fitness_identities",
    "verify_decomposition",
    "von_neumann_entropy",
    "von_neumann_field",
]

__version__ = "0.1.0"
