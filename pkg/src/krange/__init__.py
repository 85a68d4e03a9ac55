"""krange: signed operator tuples, pull-back norms, and minimal-norm
solvers on an indefinite inner-product space."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    DegenerateBasisError,
    EmptySubspaceError,
    InvalidTupleError,
    KrangeError,
    NoConvergenceError,
    NotContractionError,
    NotFullValidityError,
    NotHermitianError,
    NotInRangeError,
    NotPSDError,
    NotUniformlyPositiveError,
    ShapeMismatchError,
    WireFormatError,
    ZeroDefectError,
)
from .krein import KreinVector, Signature, Subspace, j_norm_squared, krein_inner, uniform_positivity_bound
from .linalg import (
    SpectralDecomposition,
    apply_spectral_function,
    hermitian_eig,
    operator_norm,
    pinv_psd,
    spectral_projector,
    sqrt_psd,
)
from .tuples import (
    SignedOperatorTuple,
    ValidationReport,
    isometry_deviation,
    row_adjoint,
    row_adjoint_matrix,
    row_apply,
    row_matrix,
    row_restriction_report,
    validate,
)
from .dbr import (
    GammaVerdict,
    PreimageResult,
    complement_defect,
    dbr_norm,
    min_norm_preimage,
    shmulyan_gamma,
)
from .solver import (
    SolveReport,
    SweepReport,
    convergence_sweep,
    extended_tuple,
    geometric_schedule,
    lambda_min_positive,
    solve_complement,
    solve_exact,
    solve_truncated,
)
from .localstruct import (
    NormEqualityReport,
    PositivityBoundReport,
    adjoint_image_basis,
    positivity_bound_report,
    restricted_operator_norm,
    verify_norm_equality,
)
from .generators import (
    bidisk_triplet,
    corona_triplet,
    random_tuple,
    toeplitz_analytic,
)

__all__ = [
    "__version__",
    "KrangeError",
    "ShapeMismatchError",
    "NotHermitianError",
    "NoConvergenceError",
    "NotPSDError",
    "NotContractionError",
    "NotInRangeError",
    "InvalidTupleError",
    "NotFullValidityError",
    "ZeroDefectError",
    "EmptySubspaceError",
    "NotUniformlyPositiveError",
    "DegenerateBasisError",
    "WireFormatError",
    "SpectralDecomposition",
    "hermitian_eig",
    "apply_spectral_function",
    "sqrt_psd",
    "pinv_psd",
    "spectral_projector",
    "operator_norm",
    "Signature",
    "KreinVector",
    "Subspace",
    "krein_inner",
    "j_norm_squared",
    "uniform_positivity_bound",
    "SignedOperatorTuple",
    "ValidationReport",
    "validate",
    "row_apply",
    "row_adjoint",
    "row_matrix",
    "row_adjoint_matrix",
    "isometry_deviation",
    "row_restriction_report",
    "PreimageResult",
    "GammaVerdict",
    "min_norm_preimage",
    "dbr_norm",
    "shmulyan_gamma",
    "complement_defect",
    "SolveReport",
    "SweepReport",
    "solve_truncated",
    "solve_exact",
    "solve_complement",
    "convergence_sweep",
    "extended_tuple",
    "geometric_schedule",
    "lambda_min_positive",
    "PositivityBoundReport",
    "NormEqualityReport",
    "adjoint_image_basis",
    "positivity_bound_report",
    "restricted_operator_norm",
    "verify_norm_equality",
    "toeplitz_analytic",
    "corona_triplet",
    "bidisk_triplet",
    "random_tuple",
]
