"""Cappell-Shaneson verdicts for integer polynomials.

A doubly monic f of degree n is Cappell-Shaneson (CS) when the companion
matrix A satisfies det(I - wedge^k A) = +-1 for every k <= n // 2.  The
determinant is computed exactly; witness primes are only diagnostics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import CsPolyError, NotDoublyMonicError, NotMonicError
from .finite_field import (
    FpPoly,
    _deriv,
    _gcd,
    is_k_regular_mod_p,
    is_prime,
    perfect_power,
    reduce_mod_p,
)
from .intpoly import (
    IntMatrix,
    IntPoly,
    companion,
    det,
    exterior_power_matrix,
    exterior_power_poly,
    is_positive,
    signed_reciprocal,
)

REPORT_VERSION = "cspoly.report/1"
WITNESS_TRIAL_BOUND = 10**6


@dataclass(frozen=True)
class CsConditionResult:
    k: int
    det_value: int

    @property
    def holds(self) -> bool:
        return abs(self.det_value) == 1


@dataclass(frozen=True)
class Witness:
    """Why CS_k fails: a prime p (f mod p is not k-regular), a zero
    determinant ("rational-obstruction"), or an unfactored |det| ("composite")."""

    k: int
    kind: str
    value: int | None = None

    def to_json(self):
        out = {"k": self.k, "kind": self.kind}
        if self.value is not None:
            out["value"] = str(self.value)
        return out


@dataclass(frozen=True)
class CsReport:
    input: IntPoly
    doubly_monic: bool
    conditions: tuple
    is_positive: bool | None
    witnesses: tuple = field(default=())

    @property
    def is_cs(self) -> bool:
        return self.doubly_monic and all(c.holds for c in self.conditions)

    def failed(self) -> list:
        return [c.k for c in self.conditions if not c.holds]

    def to_dict(self, witnesses: bool = True, positivity: bool = True) -> dict:
        out = {
            "version": REPORT_VERSION,
            "input": [str(c) for c in self.input.to_desc()],
            "degree": self.input.degree,
            "doubly_monic": self.doubly_monic,
            "conditions": [
                {"k": c.k, "det_value": str(c.det_value), "holds": c.holds}
                for c in self.conditions
            ],
            "is_cs": self.is_cs,
        }
        if positivity:
            out["is_positive"] = self.is_positive
        if witnesses:
            out["witnesses"] = [w.to_json() for w in self.witnesses]
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), sort_keys=True)


def _check_k(f: IntPoly, k: int):
    if not f.is_monic():
        raise NotMonicError(f"{f} is not monic")
    n = f.degree
    if not 1 <= k <= n // 2:
        raise CsPolyError(f"k must lie in 1..{n // 2} for degree {n}, got {k}")


def cs_det(f: IntPoly, k: int) -> int:
    """det(I - wedge^k A) for the companion matrix A of f."""
    if k == 1:
        return f(1)  # f(x) = det(xI - A)
    e = exterior_power_matrix(companion(f), k)
    return det(IntMatrix.identity(e.order) - e)


def cs_condition(f: IntPoly, k: int) -> CsConditionResult:
    _check_k(f, k)
    return CsConditionResult(k, cs_det(f, k))


def smallest_prime_factor(n: int, bound: int = WITNESS_TRIAL_BOUND):
    """Smallest prime factor of |n| > 1, or None when it could not be found."""
    n = abs(n)
    if n < 2:
        return None
    d = 2
    while d <= bound and d * d <= n:
        if n % d == 0:
            return d
        d += 1 if d == 2 else 2
    if d * d > n:
        return n
    pw = perfect_power(n)
    if pw is not None:
        return smallest_prime_factor(pw[0], bound)
    try:
        if is_prime(n):
            return n
    except CsPolyError:
        pass
    return None


def witness_for(k: int, det_value: int, bound: int = WITNESS_TRIAL_BOUND) -> Witness:
    if det_value == 0:
        return Witness(k, "rational-obstruction")
    p = smallest_prime_factor(det_value, bound)
    if p is None:
        return Witness(k, "composite", abs(det_value))
    return Witness(k, "prime", p)


def verify(f: IntPoly, strict: bool = True, witness_bound: int = WITNESS_TRIAL_BOUND) -> CsReport:
    """Full CS report for a monic f of degree >= 2.

    With ``strict`` (the default) a polynomial that is not doubly monic is
    refused; otherwise the report is produced with ``is_cs`` false and no
    positivity verdict.
    """
    if f.degree < 2:
        raise CsPolyError(f"degree must be at least 2, got {f.degree}")
    if not f.is_monic():
        raise NotMonicError(f"{f} is not monic")
    dm = f.is_doubly_monic()
    if strict and not dm:
        raise NotDoublyMonicError(f"{f} is not doubly monic: constant term must be {(-1) ** f.degree}")
    conds = tuple(cs_condition(f, k) for k in range(1, f.degree // 2 + 1))
    witnesses = tuple(witness_for(c.k, c.det_value, witness_bound) for c in conds if not c.holds)
    return CsReport(f, dm, conds, is_positive(f) if dm else None, witnesses)


def is_cs(f: IntPoly) -> bool:
    """Short-circuiting verdict; cheapest conditions first."""
    if not f.is_doubly_monic() or f.degree < 1:
        return False
    if abs(f(1)) != 1:
        return False
    return all(abs(cs_det(f, k)) == 1 for k in range(2, f.degree // 2 + 1))


def witness_is_valid(f: IntPoly, p: int, k: int | None = None) -> bool:
    """True when f mod p fails k-regularity (any k <= n/2 if k is None)."""
    fp = reduce_mod_p(f, p)
    ks = [k] if k is not None else range(1, f.degree // 2 + 1)
    return any(not is_k_regular_mod_p(fp, j) for j in ks)


# ---------------------------------------------------------------- criteria

def fp_signed_reciprocal(f: FpPoly) -> FpPoly:
    n = f.degree
    sign = (-1) ** n
    return FpPoly(f.p, tuple(sign * f[n - i] for i in range(n + 1)))


def is_2_regular_via_reciprocal(f: FpPoly) -> bool:
    """2-regularity of a 1-regular doubly monic f of degree > 3 over F_p:
    no common factor of degree 2 with its signed reciprocal, decided by
    deg gcd(f, f*) < 2."""
    if not f.is_doubly_monic():
        raise NotDoublyMonicError(f"{f} is not doubly monic over F_{f.p}")
    if f.degree <= 3:
        raise CsPolyError("the reciprocal criterion needs degree > 3")
    if f(1) == 0:
        raise CsPolyError("the reciprocal criterion needs f(1) != 0")
    g = f.gcd(fp_signed_reciprocal(f))
    return g.degree < 2


def _exterior_square_mod_p(f: FpPoly) -> FpPoly:
    return reduce_mod_p(exterior_power_poly(f.lift(), 2), f.p)


def is_3_regular_via_exterior(f: FpPoly) -> bool:
    """Exterior-square test for 3-regularity of a separable doubly monic f.

    Degree > 6: gcd(f^{wedge 2}, f*) = 1.  Degree 6: f* does not divide
    f^{wedge 2}.

    Only a True answer is conclusive.  Any k-triple with product 1 produces a
    common root, but so does a relation a_i^2 a_j = 1, which involves only two
    distinct roots.  Over F_2, x^6 + x^3 + 1 is 3-regular and still fails the
    test.  Use ``is_k_regular_mod_p`` when a decision is needed.
    """
    if not f.is_doubly_monic():
        raise NotDoublyMonicError(f"{f} is not doubly monic over F_{f.p}")
    if f.degree < 6:
        raise CsPolyError("the exterior criterion needs degree >= 6")
    p = f.p
    sep = _gcd(list(f.coeffs), _deriv(f.coeffs, p), p)
    if len(sep) > 1:
        raise CsPolyError(f"f is not separable: gcd(f, f') = {FpPoly(p, sep)}")
    wedge = _exterior_square_mod_p(f)
    star = fp_signed_reciprocal(f)
    if f.degree == 6:
        return (wedge % star).degree >= 0
    return wedge.gcd(star).degree == 0


def reciprocal_exterior_remainder(f: IntPoly) -> IntPoly:
    """Remainder of f^{wedge 2} on division by f* over Z.

    When its coefficients are coprime, no prime can make f* divide
    f^{wedge 2}, so degree-6 f is 3-regular modulo every p.
    """
    star = signed_reciprocal(f)
    return exterior_power_poly(f, 2).divmod_monic(star)[1]
