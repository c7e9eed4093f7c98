"""cspoly: Cappell-Shaneson polynomials.

Exact CS verdicts for integer polynomials, finite-field regularity tests,
parametric family tables, the degree-6 Diophantine solver and a box search
for higher degrees.
"""

from .cs_core import CsReport, cs_condition, cs_det, is_cs, verify, witness_is_valid
from .errors import (
    BudgetExceededError,
    CheckpointError,
    CsPolyError,
    NotDoublyMonicError,
    NotMonicError,
    UndecidedError,
)
from .finite_field import FpPoly, factor, is_k_regular_mod_p, is_regular_mod_p, reduce_mod_p
from .intpoly import IntMatrix, IntPoly, companion, exterior_power_poly, is_positive, signed_reciprocal

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CheckpointError",
    "CsPolyError",
    "CsReport",
    "FpPoly",
    "IntMatrix",
    "IntPoly",
    "NotDoublyMonicError",
    "NotMonicError",
    "UndecidedError",
    "companion",
    "cs_condition",
    "cs_det",
    "exterior_power_poly",
    "factor",
    "is_cs",
    "is_k_regular_mod_p",
    "is_positive",
    "is_regular_mod_p",
    "reduce_mod_p",
    "signed_reciprocal",
    "verify",
    "witness_is_valid",
]
