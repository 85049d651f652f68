"""Exact construction and factorization of Sobolev-type orthogonal
polynomial sequences, their folded matrix forms, and the differential
operators that make the folds bispectral.

Everything structural is rational arithmetic; floating point enters only
in explicitly float-labeled verification routes.
"""
from .errors import (
    BandViolation,
    ConfigError,
    DimensionMismatch,
    IdentityViolated,
    Infeasible,
    InsufficientMoments,
    InsufficientSequence,
    NotPositiveDefinite,
    NumericalInstability,
    OpfoldError,
    SingularLeading,
    SingularMatrix,
    SingularPivotBlock,
    SymmetryViolated,
    Underdetermined,
)
from .rationals import SignedSquare, as_fraction, rat_str
from .poly import Poly
from .linalg import Matrix, inverse, nullspace, solve_linear
from .banded import BandedOperator, BlockTridiagonal, OrthonormalBandView
from .measures import (
    BilinearForm,
    MomentFunctional,
    SobolevSpec,
    SymmetryReport,
    christoffel_shift,
    gram_matrix,
    hermite_moments,
    laguerre_moments,
    measure_form,
    sobolev_form,
    symmetry_check,
)
from .orthopoly import (
    BandedRecurrence,
    ConnectionMatrix,
    JacobiMatrix,
    MonicSequence,
    OrthonormalView,
    banded_recurrence,
    connection_matrix,
    jacobi_matrix,
    monic_sequence,
    reference_abc,
)
from .darboux import (
    BandFactorization,
    BlockLU,
    FactorizationReport,
    ShiftPowerReport,
    ZetaSequence,
    band_symmetric_factorize,
    block_lu,
    darboux_swap,
    reference_sum_product,
    reference_zeta,
    verify_h_factorization,
    verify_ul_identity,
    w_interlace_check,
)
from .matfold import (
    BlockTTRRCoeffs,
    FoldDecomposition,
    MatrixPolySequence,
    MonicNormalization,
    apply_similarity,
    build_matrix_sequence,
    fold_decompose,
    leading_orthonormal_sq,
    matrix_gram,
    matrix_ttrr,
    monic_normalize,
    orthonormal_blocks,
    reference_block_ttrr,
    reference_leading_sq,
    similarity_from_block,
)
from .bispec import (
    ConjugationResult,
    DiscoveryResult,
    EigenReport,
    EigenvalueLadder,
    FoldConjugationData,
    MinOrderResult,
    RightDifferentialOperator,
    ScalarOperator,
    apply_right,
    apply_scalar,
    conjugation_eval,
    cyclotomic_poly,
    discover_operator,
    discover_scalar,
    min_order_check,
    operator_from_json,
    operator_to_json,
    reference_operator,
    reference_scalar_ladder,
    scalar_eigenvalues,
    verify_eigen,
)

__version__ = "1.0.0"

__all__ = [
    "OpfoldError",
    "SingularMatrix",
    "InsufficientMoments",
    "NotPositiveDefinite",
    "SymmetryViolated",
    "BandViolation",
    "IdentityViolated",
    "SingularPivotBlock",
    "SingularLeading",
    "InsufficientSequence",
    "DimensionMismatch",
    "Infeasible",
    "Underdetermined",
    "ConfigError",
    "NumericalInstability",
    "SignedSquare",
    "as_fraction",
    "rat_str",
    "Poly",
    "Matrix",
    "solve_linear",
    "inverse",
    "nullspace",
    "BandedOperator",
    "OrthonormalBandView",
    "BlockTridiagonal",
    "MomentFunctional",
    "BilinearForm",
    "SobolevSpec",
    "SymmetryReport",
    "laguerre_moments",
    "hermite_moments",
    "christoffel_shift",
    "measure_form",
    "sobolev_form",
    "gram_matrix",
    "symmetry_check",
    "MonicSequence",
    "OrthonormalView",
    "JacobiMatrix",
    "BandedRecurrence",
    "ConnectionMatrix",
    "monic_sequence",
    "jacobi_matrix",
    "banded_recurrence",
    "connection_matrix",
    "reference_abc",
    "BandFactorization",
    "FactorizationReport",
    "ShiftPowerReport",
    "ZetaSequence",
    "BlockLU",
    "band_symmetric_factorize",
    "verify_h_factorization",
    "verify_ul_identity",
    "block_lu",
    "darboux_swap",
    "reference_zeta",
    "reference_sum_product",
    "w_interlace_check",
    "FoldDecomposition",
    "MatrixPolySequence",
    "MonicNormalization",
    "BlockTTRRCoeffs",
    "fold_decompose",
    "build_matrix_sequence",
    "matrix_gram",
    "monic_normalize",
    "matrix_ttrr",
    "orthonormal_blocks",
    "leading_orthonormal_sq",
    "similarity_from_block",
    "apply_similarity",
    "reference_block_ttrr",
    "reference_leading_sq",
    "RightDifferentialOperator",
    "EigenvalueLadder",
    "EigenReport",
    "DiscoveryResult",
    "MinOrderResult",
    "ScalarOperator",
    "ConjugationResult",
    "FoldConjugationData",
    "apply_right",
    "apply_scalar",
    "scalar_eigenvalues",
    "verify_eigen",
    "discover_operator",
    "min_order_check",
    "discover_scalar",
    "reference_operator",
    "reference_scalar_ladder",
    "cyclotomic_poly",
    "conjugation_eval",
    "operator_to_json",
    "operator_from_json",
]
