"""Toolkit for the unitary freedom in density-matrix decompositions.

Builds purifications of weighted-ket ensembles, extracts the ensemble hiding
in any ancilla basis, converts between decompositions of one density matrix
with ancilla-side unitaries, constructs a decomposition around any chosen
support vector, and simulates the measurement that makes one decomposition
operationally visible without disturbing the system state.
"""

from .ensembles import (
    DEFAULT_COLLINEARITY_TOL,
    DensityMatrix,
    RhoEnsemble,
    densities_match,
    density_from_matrix,
    eigen_ensemble,
    ensemble_to_density,
    ensembles_equal,
    is_linearly_independent,
    validate_ensemble,
)
from .errors import (
    DensitiesDiffer,
    DimensionMismatch,
    DocumentError,
    InvalidEnsemble,
    NotHermitian,
    NotInSupport,
    NotNormalized,
    NotOrthonormal,
    NotOrthonormalBasis,
    NotUnitary,
    NumericalFailure,
    OrderExceedsAncillaDim,
    RhokitError,
    TracesDiffer,
    WeightsNotNormalized,
)
from .linalg import (
    DEFAULT_RANK_TOL,
    DEFAULT_TOL,
    SchmidtForm,
    complete_orthonormal,
    eig_hermitian,
    numerical_rank,
    partial_trace_m,
    schmidt_decompose,
    schmidt_reconstruct,
    tensor_ket,
)
from .purification import (
    Ancilla,
    JointState,
    UMap,
    apply_unitary_umap,
    check_umap,
    ensemble_containing,
    ensemble_from_basis,
    lemma_unitary,
    match_purification,
    purify,
    umap_between,
)
from .steering import (
    MeasurementRecord,
    SteeringReport,
    measure_ancilla,
    realize,
    sample_outcomes,
    steer,
)

__version__ = "0.1.0"

__all__ = [
    "Ancilla",
    "DEFAULT_COLLINEARITY_TOL",
    "DEFAULT_RANK_TOL",
    "DEFAULT_TOL",
    "DensitiesDiffer",
    "DensityMatrix",
    "DimensionMismatch",
    "DocumentError",
    "InvalidEnsemble",
    "JointState",
    "MeasurementRecord",
    "NotHermitian",
    "NotInSupport",
    "NotNormalized",
    "NotOrthonormal",
    "NotOrthonormalBasis",
    "NotUnitary",
    "NumericalFailure",
    "OrderExceedsAncillaDim",
    "RhoEnsemble",
    "RhokitError",
    "SchmidtForm",
    "SteeringReport",
    "TracesDiffer",
    "UMap",
    "WeightsNotNormalized",
    "apply_unitary_umap",
    "check_umap",
    "complete_orthonormal",
    "densities_match",
    "density_from_matrix",
    "eig_hermitian",
    "eigen_ensemble",
    "ensemble_containing",
    "ensemble_from_basis",
    "ensemble_to_density",
    "ensembles_equal",
    "is_linearly_independent",
    "lemma_unitary",
    "match_purification",
    "measure_ancilla",
    "numerical_rank",
    "partial_trace_m",
    "purify",
    "realize",
    "sample_outcomes",
    "schmidt_decompose",
    "schmidt_reconstruct",
    "steer",
    "tensor_ket",
    "umap_between",
    "validate_ensemble",
]
