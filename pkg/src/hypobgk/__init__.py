"""Hypocoercivity certificates for linearized BGK equations on the torus.

The package assembles Hermite-spectral velocity discretizations of the
linearized BGK collision operator in one, two and three dimensions,
computes hypocoercivity indices, constructs Lyapunov transformation
matrices, evaluates closed-form exponential decay certificates, and
validates them against numerically computed spectral gaps and modal
simulations.
"""

from .hermite import (
    BasisSpec,
    basis_change_matrix,
    eval_basis,
    gauss_hermite,
    lex_index,
    multi_index,
    recurrence_coeffs,
)
from .operators import (
    ModalGenerator,
    OperatorPair,
    build_L1,
    build_L2,
    modal_generator,
    mode_moduli,
    operator_pair,
)
from .index import (
    IndexReport,
    check_invariance_conditions,
    hypocoercivity_index,
    is_hypocoercive_spectral,
)
from .ansatz import (
    AnsatzError,
    PAnsatz,
    ansatz_chain3,
    ansatz_dimker1,
    ansatz_dimker2,
    bgk_P,
    kato_slopes,
    optimal_P,
)
from .certificate import (
    DecayCertificate,
    MinorTable,
    alpha3_1d,
    assemble_D_block,
    certify,
    minors_1d,
    minors_2d,
    minors_3d,
    mu_limits_1d,
    mu_value,
    rational_monotone_check,
)
from .gap import (
    ConvergenceStudy,
    EigenvalueFailure,
    GapReport,
    complex_eigenvalues,
    convergence_study,
    spectral_gap,
)
from .sim import (
    ModalState,
    concentrated_initial_data,
    decay_envelope,
    entropy,
    evolve,
    h_norm,
    l1_distance_1d,
    moments,
    run_trajectory,
    t_init,
)

__version__ = "0.1.0"

__all__ = [
    "AnsatzError",
    "BasisSpec",
    "ConvergenceStudy",
    "DecayCertificate",
    "EigenvalueFailure",
    "GapReport",
    "IndexReport",
    "MinorTable",
    "ModalGenerator",
    "ModalState",
    "OperatorPair",
    "PAnsatz",
    "alpha3_1d",
    "ansatz_chain3",
    "ansatz_dimker1",
    "ansatz_dimker2",
    "assemble_D_block",
    "basis_change_matrix",
    "bgk_P",
    "build_L1",
    "build_L2",
    "certify",
    "check_invariance_conditions",
    "complex_eigenvalues",
    "concentrated_initial_data",
    "convergence_study",
    "decay_envelope",
    "entropy",
    "eval_basis",
    "evolve",
    "gauss_hermite",
    "h_norm",
    "hypocoercivity_index",
    "is_hypocoercive_spectral",
    "kato_slopes",
    "l1_distance_1d",
    "lex_index",
    "minors_1d",
    "minors_2d",
    "minors_3d",
    "modal_generator",
    "mode_moduli",
    "moments",
    "mu_limits_1d",
    "mu_value",
    "multi_index",
    "operator_pair",
    "optimal_P",
    "rational_monotone_check",
    "recurrence_coeffs",
    "run_trajectory",
    "spectral_gap",
    "t_init",
]
