"""Exact determinant-based point counting on affine surfaces.

The package enumerates integer points on surfaces under congruence side
conditions, certifies modulus-power divisibility of monomial-matrix
minors by explicit column operations, extracts low-degree covers from
matrix kernels, and applies the machinery to diagonal quadrics and sums
of unlike powers.  Every count, determinant, and valuation is exact.
"""

__version__ = "0.1.0"

from .applications import (
    GcdPowerSum,
    QuadricCount,
    QuadricExponents,
    QuadricInstance,
    SubvarietyReport,
    SubvarietySystem,
    ThreefoldSlice,
    UnlikeCount,
    UnlikeExponents,
    UnlikePowersInstance,
    WronskianReport,
    build_slice,
    count_quadric,
    count_unlike,
    excluded_subvarieties,
    gcd_power_sum,
    predicted_exponents,
    q_of_n,
    quadric_cover_scale,
    wronskian_bound_check,
)
from .determinant import (
    AuxiliaryPolynomial,
    CheckedMinor,
    ClassOutcome,
    CoverReport,
    DivisibilityCertificate,
    FalsificationRecord,
    MonomialMatrix,
    aux_pipeline,
    build_matrix,
    congruence_certificates,
    congruence_reduce,
    integer_determinant,
    minor_determinant,
    null_space_polynomial,
    p_adic_valuation,
    prime_power_valuation,
    rank_over_rationals,
    select_shift,
)
from .enumeration import (
    PointSet,
    ResidueData,
    SideCondition,
    bad_prime_product,
    enumerate_points,
    residue_split,
    split_leftover,
)
from .errors import ContractViolation, HypothesisViolation, SoundnessError
from .exponents import (
    INFINITE,
    BoxBounds,
    ExactLog,
    ExponentSet,
    MethodParams,
    SetStatistics,
    build_exponent_set,
    choose_Y,
    compute_params,
    default_floor_constant,
    lambda_single,
    lambda_total,
    main_term_deviation,
    set_statistics,
    shift_floor,
    shift_multiplicity,
    side_log_height,
)
from .polynomials import (
    IntegerPolynomial,
    MonomialOrder,
    RationalUniPoly,
    compare,
    evaluate,
    is_coprime,
    max_exponent,
    partial_derivative,
    polynomial_gcd,
    top_degree_part,
    wronskian,
)

__all__ = [
    "AuxiliaryPolynomial",
    "BoxBounds",
    "CheckedMinor",
    "ClassOutcome",
    "ContractViolation",
    "CoverReport",
    "DivisibilityCertificate",
    "ExactLog",
    "ExponentSet",
    "FalsificationRecord",
    "GcdPowerSum",
    "HypothesisViolation",
    "INFINITE",
    "IntegerPolynomial",
    "MethodParams",
    "MonomialMatrix",
    "MonomialOrder",
    "PointSet",
    "QuadricCount",
    "QuadricExponents",
    "QuadricInstance",
    "RationalUniPoly",
    "ResidueData",
    "SetStatistics",
    "SideCondition",
    "SoundnessError",
    "SubvarietyReport",
    "SubvarietySystem",
    "ThreefoldSlice",
    "UnlikeCount",
    "UnlikeExponents",
    "UnlikePowersInstance",
    "WronskianReport",
    "aux_pipeline",
    "bad_prime_product",
    "build_exponent_set",
    "build_matrix",
    "build_slice",
    "choose_Y",
    "compare",
    "compute_params",
    "congruence_certificates",
    "congruence_reduce",
    "count_quadric",
    "count_unlike",
    "default_floor_constant",
    "enumerate_points",
    "evaluate",
    "excluded_subvarieties",
    "gcd_power_sum",
    "integer_determinant",
    "is_coprime",
    "lambda_single",
    "lambda_total",
    "main_term_deviation",
    "max_exponent",
    "minor_determinant",
    "null_space_polynomial",
    "p_adic_valuation",
    "partial_derivative",
    "polynomial_gcd",
    "predicted_exponents",
    "prime_power_valuation",
    "q_of_n",
    "quadric_cover_scale",
    "rank_over_rationals",
    "residue_split",
    "select_shift",
    "set_statistics",
    "shift_floor",
    "shift_multiplicity",
    "side_log_height",
    "split_leftover",
    "top_degree_part",
    "wronskian",
    "wronskian_bound_check",
]
