"""Correlation measures for small mixed quantum states.

The package computes quantum discord (projective and POVM variants),
entanglement of formation, and classical correlations, routing every
request either through closed forms, through the purification duality
that trades a measurement minimization for an entanglement quantity, or
through independent brute-force searches that certify the shortcuts.
"""

from .discord import (
    CorrelationReport,
    conditional_entropy_povm,
    conditional_entropy_projective,
    d_component_eof,
    discord,
    duality_residual,
    eof_via_conditional_entropy,
)
from .families import (
    PhaseDampingParams,
    Rank2Params,
    Rank2Report,
    ThreeQubitParams,
    fig1_curve,
    fig2_grid,
    phase_damping_report,
    phase_damping_state,
    rank2_bc_xstate,
    rank2_report,
    rank2_state,
    symmetric_discord,
    symmetric_discord_candidates,
    three_qubit_concurrences,
    three_qubit_report,
    three_qubit_state,
)
from .kernels import active_backend, available_backends, set_backend
from .oracle import (
    Ensemble,
    ProjectiveMeasurement,
    RankOnePOVM,
    SearchConfig,
    SearchResult,
    dilated_ensemble,
    ensemble_eof_search,
    povm_search,
    projective_search,
)
from .pair_measures import (
    PairMeasures,
    binary_entropy,
    concurrence_two_qubit,
    entropy_entanglement,
    eof_from_concurrence,
    eof_two_qubit,
    mutual_information,
    pair_measures,
    spin_flip_lambdas,
)
from .states import (
    DensityMatrix,
    Purification,
    PureState,
    Spectrum,
    StateValidationError,
    UnsupportedShapeError,
    density_matrix,
    entropy_of_spectrum,
    hermitian_eig,
    load_state,
    partial_trace,
    pure_state,
    purify,
    save_state,
    von_neumann_entropy,
)
from .verification import CheckResult, run_all

__version__ = "1.0.0"

__all__ = [
    "CheckResult",
    "CorrelationReport",
    "DensityMatrix",
    "Ensemble",
    "PairMeasures",
    "PhaseDampingParams",
    "ProjectiveMeasurement",
    "Purification",
    "PureState",
    "Rank2Params",
    "Rank2Report",
    "RankOnePOVM",
    "SearchConfig",
    "SearchResult",
    "Spectrum",
    "StateValidationError",
    "ThreeQubitParams",
    "UnsupportedShapeError",
    "active_backend",
    "available_backends",
    "binary_entropy",
    "concurrence_two_qubit",
    "conditional_entropy_povm",
    "conditional_entropy_projective",
    "d_component_eof",
    "density_matrix",
    "dilated_ensemble",
    "discord",
    "duality_residual",
    "ensemble_eof_search",
    "entropy_entanglement",
    "entropy_of_spectrum",
    "eof_from_concurrence",
    "eof_two_qubit",
    "eof_via_conditional_entropy",
    "fig1_curve",
    "fig2_grid",
    "hermitian_eig",
    "load_state",
    "mutual_information",
    "pair_measures",
    "partial_trace",
    "phase_damping_report",
    "phase_damping_state",
    "povm_search",
    "projective_search",
    "pure_state",
    "purify",
    "rank2_bc_xstate",
    "rank2_report",
    "rank2_state",
    "run_all",
    "save_state",
    "set_backend",
    "spin_flip_lambdas",
    "symmetric_discord",
    "symmetric_discord_candidates",
    "three_qubit_concurrences",
    "three_qubit_report",
    "three_qubit_state",
    "von_neumann_entropy",
    "__version__",
]
