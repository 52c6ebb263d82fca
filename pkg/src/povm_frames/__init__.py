"""Probability assignments on effects and POVMs.

The operator layer handles effects, projectors and density operators. On top
of it sit frame-function reconstruction and a spherical-harmonic test of which
assignments survive on a restricted family of qubit measurements.
"""

from .catalog import (
    CatalogEntry,
    builtin_set,
    platonic_table,
    polygon_rule,
    uniform_povm_admissibility,
)
from .errors import (
    BadParameter,
    DimensionMismatch,
    FormatError,
    FrameError,
    Incomplete,
    IncompleteVectorSet,
    IndexOutOfRange,
    InvalidBlochVector,
    MissingSamples,
    NotDensity,
    NotEffect,
    NotHermitian,
    NotProjector,
    NotRotation,
    NotUnitVector,
    OutsideCone,
    RealityViolated,
    UnknownName,
)
from .frames import (
    FrameLawReport,
    FrameOracle,
    OperatorBasis,
    born_frame,
    check_frame_laws,
    default_basis,
    extend_to_hermitian,
    reconstruct_density,
    reconstruct_from_samples,
)
from .harmonics import (
    AdmissibilitySet,
    FrameCoefficients,
    SumConditionReport,
    admissible_harmonics,
    assoc_legendre,
    born_coefficients,
    check_povm_normalization,
    evaluate_frame,
    shrink_to_nonnegative,
    sum_condition,
    ylm,
)
from .operators import (
    ConvexDecomposition,
    DensityOperator,
    Effect,
    HermitianOperator,
    Povm,
    Projector,
    born_probability,
    convex_decompose,
    hs_inner,
    is_effect,
    is_extreme,
    spectrum,
    validate_povm,
)
from .qubit import (
    BlochEffect,
    Rotation3,
    UnitVectorSet,
    bloch_from_effect,
    effect_from_bloch,
    effects_from_vector_set,
    rotate_set,
    second_moment,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilitySet",
    "BadParameter",
    "BlochEffect",
    "CatalogEntry",
    "ConvexDecomposition",
    "DensityOperator",
    "DimensionMismatch",
    "Effect",
    "FormatError",
    "FrameCoefficients",
    "FrameError",
    "FrameLawReport",
    "FrameOracle",
    "HermitianOperator",
    "Incomplete",
    "IncompleteVectorSet",
    "IndexOutOfRange",
    "InvalidBlochVector",
    "MissingSamples",
    "NotDensity",
    "NotEffect",
    "NotHermitian",
    "NotProjector",
    "NotRotation",
    "NotUnitVector",
    "OperatorBasis",
    "OutsideCone",
    "Povm",
    "Projector",
    "RealityViolated",
    "Rotation3",
    "SumConditionReport",
    "UnitVectorSet",
    "UnknownName",
    "admissible_harmonics",
    "assoc_legendre",
    "bloch_from_effect",
    "born_coefficients",
    "born_frame",
    "born_probability",
    "builtin_set",
    "check_frame_laws",
    "check_povm_normalization",
    "convex_decompose",
    "default_basis",
    "effect_from_bloch",
    "effects_from_vector_set",
    "evaluate_frame",
    "extend_to_hermitian",
    "hs_inner",
    "is_effect",
    "is_extreme",
    "platonic_table",
    "polygon_rule",
    "reconstruct_density",
    "reconstruct_from_samples",
    "rotate_set",
    "second_moment",
    "shrink_to_nonnegative",
    "spectrum",
    "sum_condition",
    "uniform_povm_admissibility",
    "validate_povm",
    "ylm",
]
