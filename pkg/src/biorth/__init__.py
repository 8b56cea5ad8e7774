"""Exact bi-orthogonal machinery for the open q-exclusion chain."""

from .core import (
    AWParams,
    BiorthError,
    DenominatorVanishes,
    HoppingRates,
    InvalidParams,
    NegativeRadicand,
    NotIrreducible,
    ShapeError,
    SingularParams,
    SizeLimit,
    UnsupportedQ,
    ZeroParameter,
    d_natural,
    e_natural,
    g_coeff,
    is_valid,
    parse_rational,
    phi_terminating,
    qpoch,
    to_aw,
    to_aw_exact,
    to_rates,
    validate,
)
from .bimoment import BimomentMatrix, bimoment_block, bimoment_table
from .ldu import (
    build_D,
    build_L,
    build_L_inverse,
    build_U,
    build_U_inverse,
    det_bimoment,
    det_closed_form,
    verify_ldu,
)
from .biortho import (
    PolySeq,
    biorthogonality_check,
    bordered_determinant_check,
    monomial_expansion_check,
    pairing,
    polys_from_inverse,
    polys_from_recurrence,
)
from .wordfun import (
    WordPoly,
    check_defining_relations,
    eval_by_elimination,
    functional,
    normal_order,
    parse_word,
)
from .repmat import (
    aw_coeffs,
    aw_eval,
    jacobi_moments,
    rep_orthonormal,
    rep_rational,
    t_polys,
    verify_algebra,
    verify_aw_match,
    verify_boundary,
    verify_uchiyama_algebra,
)
from .asep import (
    ComparisonReport,
    StationaryDistribution,
    ansatz_weight,
    compare,
    stationary_ansatz,
    stationary_exact,
)
from .reporting import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "AWParams",
    "BimomentMatrix",
    "BiorthError",
    "ComparisonReport",
    "DenominatorVanishes",
    "HoppingRates",
    "InvalidParams",
    "NegativeRadicand",
    "NotIrreducible",
    "PolySeq",
    "ShapeError",
    "SingularParams",
    "SizeLimit",
    "StationaryDistribution",
    "UnsupportedQ",
    "VerificationReport",
    "WordPoly",
    "ZeroParameter",
    "ansatz_weight",
    "aw_coeffs",
    "aw_eval",
    "bimoment_block",
    "bimoment_table",
    "biorthogonality_check",
    "bordered_determinant_check",
    "build_D",
    "build_L",
    "build_L_inverse",
    "build_U",
    "build_U_inverse",
    "check_defining_relations",
    "compare",
    "d_natural",
    "det_bimoment",
    "det_closed_form",
    "e_natural",
    "eval_by_elimination",
    "functional",
    "g_coeff",
    "is_valid",
    "jacobi_moments",
    "monomial_expansion_check",
    "normal_order",
    "pairing",
    "parse_rational",
    "parse_word",
    "phi_terminating",
    "polys_from_inverse",
    "polys_from_recurrence",
    "qpoch",
    "rep_orthonormal",
    "rep_rational",
    "stationary_ansatz",
    "stationary_exact",
    "t_polys",
    "to_aw",
    "to_aw_exact",
    "to_rates",
    "validate",
    "verify_algebra",
    "verify_aw_match",
    "verify_boundary",
    "verify_ldu",
    "verify_uchiyama_algebra",
]
