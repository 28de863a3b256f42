"""Certified product-state approximations for signed transverse-field Ising models.

The pipeline: parse an instance, solve a disk-constrained semidefinite
relaxation whose value upper-bounds the true quantum optimum, round the
solution to explicit product states with guaranteed approximation ratios,
and (at desk scale) certify everything against dense exact diagonalization.
"""

from .constants import alpha_gw, beta_of_q, q_opt_curve, q_star, two_candidate_gamma, warmup_ratio
from .exact import (
    BlochAssignment,
    DenseHamiltonian,
    build_hamiltonian,
    build_tfim_hamiltonian,
    classical_z_optimum,
    evaluate_product_state,
    lambda_max,
    lambda_min,
    optimize_product_state,
    product_state_vector,
    spectrum,
    state_moments,
)
from .instance import (
    Edge,
    Instance,
    InstanceError,
    is_frustrated,
    load_instance,
    parse_instance,
    random_instance,
    serialize_instance,
    shift_constants,
    triangle_instance,
)
from .relax import SdpSolution, SolverError, gram_vectors, repair_feasibility, solve_soc_sdp
from .rounding import (
    RoundingOutcome,
    algorithm_a,
    algorithm_b,
    algorithm_c,
    best_of,
    hyperplane_signs,
    run_trials,
    trial_rng,
    warmup_field_state,
    warmup_ising_state,
)

__version__ = "0.1.0"

__all__ = [
    "Edge",
    "Instance",
    "InstanceError",
    "parse_instance",
    "serialize_instance",
    "load_instance",
    "shift_constants",
    "is_frustrated",
    "random_instance",
    "triangle_instance",
    "DenseHamiltonian",
    "BlochAssignment",
    "build_hamiltonian",
    "build_tfim_hamiltonian",
    "spectrum",
    "lambda_max",
    "lambda_min",
    "evaluate_product_state",
    "product_state_vector",
    "state_moments",
    "optimize_product_state",
    "classical_z_optimum",
    "SdpSolution",
    "SolverError",
    "solve_soc_sdp",
    "gram_vectors",
    "repair_feasibility",
    "RoundingOutcome",
    "trial_rng",
    "hyperplane_signs",
    "algorithm_a",
    "algorithm_b",
    "algorithm_c",
    "warmup_field_state",
    "warmup_ising_state",
    "best_of",
    "run_trials",
    "alpha_gw",
    "beta_of_q",
    "q_star",
    "warmup_ratio",
    "two_candidate_gamma",
    "q_opt_curve",
]
