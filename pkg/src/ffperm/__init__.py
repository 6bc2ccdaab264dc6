"""Permutation polynomials over finite fields built from the trace map.

Covers inverses of linearized binomials on trace kernels, complete mappings
and their inverses, Latin squares from complete mappings, and
Maiorana-McFarland vectorial bent functions, all with exact verification.
"""

from .errors import (
    BudgetExceeded,
    ClaimViolated,
    ContextMismatch,
    FFPermError,
    IndexOutOfRange,
    InvalidParameters,
    NotACompleteMapping,
    NotAPermutation,
    OrderMismatch,
    PMismatch,
)
from .field import FieldContext, FieldElement, make_field
from .maps import FieldMap, is_complete_mapping

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ClaimViolated",
    "ContextMismatch",
    "FFPermError",
    "FieldContext",
    "FieldElement",
    "FieldMap",
    "IndexOutOfRange",
    "InvalidParameters",
    "NotACompleteMapping",
    "NotAPermutation",
    "OrderMismatch",
    "PMismatch",
    "is_complete_mapping",
    "make_field",
]
