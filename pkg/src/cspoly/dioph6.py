"""Degree-6 Cappell-Shaneson polynomials with a prescribed q = c5 - c1.

With c0 = 1, f(1) = eps1, det(I - wedge^2 A) = eps2, det(I - wedge^3 A) = eps3
and p = c4 - c2, the three CS conditions become

    c3 = -c1 - c2 - c4 - c5 - 2 + eps1
    (p + 2q) w = eps2 - eps1 q^3,   w = q(p - 2q)c1 - q^2 c2 - p^2 + 2pq - q^3 - q^2
    eps1 (c1^2 + (q - 4)c1 - 4c2 - 2p - 2q) - w + 1 = eps3.

For q != 0 and eps2 != eps1 q^3 the divisor d = p + 2q runs over the finitely
many divisors of the right-hand side and each choice leaves a quadratic in c1.
The remaining regimes (q = 0, and q = +-1 with eps2 = eps1 q) are solved in
closed form and yield one-parameter rows in ``a``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import isqrt

from .cs_core import cs_det, is_cs
from .errors import BudgetExceededError, CsPolyError
from .finite_field import trial_factor
from .intpoly import IntPoly, is_positive
from .parallel import ordered_map
from .parampoly import ParamPoly

DEFAULT_Q_BOUND = 64
SIGNS = (1, -1)
POSITIVITY_SAMPLE = range(-60, 61)


@dataclass(frozen=True)
class SignTriple:
    e1: int
    e2: int
    e3: int

    def __post_init__(self):
        if {self.e1, self.e2, self.e3} - {1, -1}:
            raise CsPolyError("signs must be +1 or -1")


@dataclass(frozen=True)
class Degree6Solution:
    """One table row: integer tuple or a one-parameter row in ``a``."""

    coeffs: tuple  # c0..c5, ints or ParamPoly
    q: int
    signs: SignTriple
    divisor: int | None  # p + 2q; None on the p = -2q branch
    branch: str  # "divisor", "q0", "p=-2q", "w=0"

    @property
    def parametric(self) -> bool:
        return any(isinstance(c, ParamPoly) for c in self.coeffs)

    def entries(self) -> list:
        return [str(c) for c in self.coeffs]

    def instantiate(self, a: int) -> IntPoly:
        vals = [c.evaluate_int(a=a) if isinstance(c, ParamPoly) else c for c in self.coeffs]
        return IntPoly(tuple(vals) + (1,))

    def poly(self) -> IntPoly:
        if self.parametric:
            raise CsPolyError("parametric row; use instantiate(a)")
        return IntPoly(tuple(self.coeffs) + (1,))

    def sort_key(self):
        if self.parametric:
            return (0, tuple(self.entries()))
        return (1, tuple(self.coeffs))

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "coeffs": self.entries(),
            "parametric": self.parametric,
            "eps": [self.signs.e1, self.signs.e2, self.signs.e3],
            "divisor": None if self.divisor is None else str(self.divisor),
            "branch": self.branch,
        }


def _tuple(c1, c2, p, q, e1):
    c4 = c2 + p
    c5 = c1 + q
    c3 = -c1 - c2 - c4 - c5 - 2 + e1
    return (1, c1, c2, c3, c4, c5)


def w_value(c1, c2, p, q):
    return q * (p - 2 * q) * c1 - q * q * c2 - p * p + 2 * p * q - q**3 - q * q


def residual(coeffs, signs: SignTriple):
    """Left minus right sides of the three reduced equations; all zero for a solution."""
    _, c1, c2, c3, c4, c5 = coeffs
    e1, e2, e3 = signs.e1, signs.e2, signs.e3
    p, q = c4 - c2, c5 - c1
    w = w_value(c1, c2, p, q)
    ra = c3 - (-c1 - c2 - c4 - c5 - 2 + e1)
    rb = (p + 2 * q) * w - (e2 - e1 * q**3)
    rc = e1 * (c1 * c1 + (q - 4) * c1 - 4 * c2 - 2 * p - 2 * q) - w + 1 - e3
    return ra, rb, rc


def cubic_form(coeffs) -> int:
    """The cubic whose square is det(I - wedge^3 A) when c0 = 1.

    Since wedge^3 of a 6x6 unimodular matrix preserves an alternating form,
    the determinant is a perfect square; eps3 is the sign of this root.
    """
    _, c1, c2, c3, c4, c5 = coeffs
    return (c1**3 + c1 * c1 * c4 + c1 * c3 * c5 + c2 * c5 * c5 + c5**3 - 4 * c1 * c2 + c3 * c3
            - 4 * c2 * c4 - 2 * c1 * c5 - 4 * c4 * c5 + 4 * c3 + 4)


def divisors(n: int) -> list:
    """All positive and negative divisors of n != 0, ascending."""
    if n == 0:
        raise CsPolyError("0 has infinitely many divisors")
    n = abs(n)
    pos = [1]
    for prime, e in trial_factor(n, 10**7).items():
        pos = [d * prime**k for d in pos for k in range(e + 1)]
    return sorted([-d for d in pos] + pos)


def _int_roots(A, B, C):
    """Integer roots of A x^2 + B x + C (A != 0)."""
    disc = B * B - 4 * A * C
    if disc < 0:
        return []
    s = isqrt(disc)
    if s * s != disc:
        return []
    out = set()
    for num in (-B + s, -B - s):
        if num % (2 * A) == 0:
            out.add(num // (2 * A))
    return sorted(out)


def _centered_residues(m):
    return range(-((m - 1) // 2), m // 2 + 1)


def _congruence_rows(quad, denom):
    """Parametrize the integer c1 with denom | quad(c1) as c1 = m a + r.

    quad is an integer polynomial in c1 given as (k0, k1, k2).  Returns a
    list of (c1 row, c2 row) with c2 = quad(c1) / denom, using the least
    period m of the solution set and centered residues r.
    """
    D = abs(denom)
    k0, k1, k2 = quad

    def ok(x):
        return (k0 + k1 * x + k2 * x * x) % D == 0

    sols = {x for x in range(D) if ok(x)}
    if not sols:
        return []
    m = next(m for m in range(1, D + 1) if D % m == 0 and all(((x + m) % D) in sols for x in sols))
    rows = []
    a = ParamPoly.var("a")
    for r in _centered_residues(m):
        if r % D in sols or ok(r):
            c1 = a * m + r
            c2 = (c1 * c1 * k2 + c1 * k1 + k0) * Fraction(1, denom)
            rows.append((c1, c2))
    return rows


def _parametric_tuple(c1, c2, p, q, e1):
    c4 = c2 + p
    c5 = c1 + q
    c3 = -c1 - c2 - c4 - c5 - 2 + e1
    return (1, c1, c2, c3, c4, c5)


def _solve_q0(e1, e2):
    p = -e2  # -p^3 = eps2
    out = []
    for e3 in SIGNS:
        # 4 c2 = (c1 - 2)^2 - R
        R = 4 + 2 * p + e1 * (e3 - 2)
        for c1, c2 in _congruence_rows((4 - R, -4, 1), 4):
            out.append(Degree6Solution(_parametric_tuple(c1, c2, p, 0, e1), 0, SignTriple(e1, e2, e3), p, "q0"))
    return out


def _solve_degenerate(q, e1, e2):
    """q = +-1 with eps2 = eps1 q, where (p + 2q) w = 0."""
    out = []
    a = ParamPoly.var("a")
    for e3 in SIGNS:
        signs = SignTriple(e1, e2, e3)
        # p = -2q: w is free and (C') fixes c2 as a quadratic in c1 over 1 - 4 eps1
        p = -2 * q
        k = (e3 - e1 * 2 * q - 10 - q, -e1 * (q - 4) - 4, -e1)
        for c1, c2 in _congruence_rows(k, 1 - 4 * e1):
            out.append(Degree6Solution(_parametric_tuple(c1, c2, p, q, e1), q, signs, None, "p=-2q"))
        # w = 0: c1 = (4qp - q - 4 +- s) / 2 with s^2 = 1 + 4 eps1 (eps3 - 1)
        disc = 1 + 4 * e1 * (e3 - 1)
        if disc < 0 or isqrt(disc) ** 2 != disc:
            continue
        s = isqrt(disc)
        pp = a + q
        for sign in sorted({s, -s}):
            c1 = (pp * (4 * q) - q - 4 + sign) * Fraction(1, 2)
            c2 = (pp - 2 * q) * c1 * q - pp * pp + pp * (2 * q) - q - 1
            out.append(Degree6Solution(_parametric_tuple(c1, c2, pp, q, e1), q, signs, None, "w=0"))
    return out


def _solve_divisor(q, e1, e2, prune=True):
    N = e2 - e1 * q**3
    out = []
    for d in divisors(N):
        w = N // d
        if prune and (w + d * d) % q:
            continue  # w = -p^2 = -d^2 (mod q)
        p = d - 2 * q
        K = p * p - 2 * p * q + q**3 + q * q + w
        for e3 in SIGNS:
            A = q * q
            B = q * q * (q - 4) - 4 * q * (p - 2 * q)
            C = 4 * K - q * q * (2 * p + 2 * q) + e1 * q * q * (1 - w - e3)
            for c1 in _int_roots(A, B, C):
                num = q * (p - 2 * q) * c1 - K
                if num % (q * q):
                    continue
                c2 = num // (q * q)
                out.append(Degree6Solution(_tuple(c1, c2, p, q, e1), q, SignTriple(e1, e2, e3), d, "divisor"))
    return out


def _check_budget(q, bound):
    limit = DEFAULT_Q_BOUND if bound is None else bound
    if abs(q) > limit:
        raise BudgetExceededError(
            f"|q| = {abs(q)} exceeds the bound {limit}; |eps2 - eps1 q^3| up to {abs(q) ** 3 + 1}",
            abs(q) ** 3 + 1,
        )


def normalize_parametric(row: Degree6Solution) -> Degree6Solution:
    """Fix the parametrization of a one-parameter row.

    With c1 = m a + r, the substitution a -> +-a + k is chosen so that m > 0
    and the constant term of (c1 + c5) / 2 = c1 + q/2 lies in (-m/2, m/2].
    """
    if not row.parametric:
        return row
    c1 = row.coeffs[1]
    m = c1.coefficient((1,))
    if c1.degree() != 1 or m == 0:
        return row
    a = ParamPoly.var("a")
    sign = 1 if m > 0 else -1
    m = abs(m)
    # a -> sign * (a + k) turns c1 into m a + (r + m k)
    x = c1.coefficient((0,)) + Fraction(row.q, 2)
    k = int((Fraction(m, 2) - x) // m)
    image = (a + k) * sign
    coeffs = tuple(c.substitute(a=image) if isinstance(c, ParamPoly) else c for c in row.coeffs)
    return Degree6Solution(coeffs, row.q, row.signs, row.divisor, row.branch)


def solve_q(q: int, prune: bool = True, bound: int | None = None) -> list:
    """All degree-6 CS polynomials with c5 - c1 = q, deduplicated and sorted."""
    _check_budget(q, bound)
    sols = []
    for e1 in SIGNS:
        for e2 in SIGNS:
            if q == 0:
                sols += _solve_q0(e1, e2)
            elif e2 - e1 * q**3 == 0:
                sols += _solve_degenerate(q, e1, e2)
            else:
                sols += _solve_divisor(q, e1, e2, prune)
    sols = [normalize_parametric(s) for s in sols]
    seen = {}
    for s in sols:
        key = tuple(s.entries())
        seen.setdefault(key, s)
    out = sorted(seen.values(), key=Degree6Solution.sort_key)
    for s in out:
        _assert_solution(s)
    return out


def _assert_solution(s: Degree6Solution):
    pts = [0, 1, -1, 3, -4] if s.parametric else [None]
    for a in pts:
        f = s.instantiate(a) if s.parametric else s.poly()
        coeffs = tuple(f.coeffs[:6])
        if any(residual(coeffs, s.signs)):
            raise AssertionError(f"row {s.entries()} does not solve the reduced system")
        if f(1) != s.signs.e1 or cs_det(f, 2) != s.signs.e2 or cubic_form(coeffs) != s.signs.e3:
            raise AssertionError(f"row {s.entries()} has inconsistent signs")
        if cs_det(f, 3) != 1:
            raise AssertionError(f"row {s.entries()} fails the third condition")


# ---------------------------------------------------------------- basic rows

def basic_divisors(q: int, e1: int, e2: int) -> list:
    if q < 2:
        raise CsPolyError("basic divisors are defined for q >= 2")
    if e1 == e2:
        vals = (1, q - 1, q * q + q + 1, q**3 - 1)
    else:
        vals = (1, q + 1, q * q - q + 1, q**3 + 1)
    out = sorted({s * v for v in vals for s in (1, -1)}, key=lambda x: (abs(x), -x))
    return out


def is_basic(f: IntPoly) -> bool:
    if f.degree != 6 or not is_cs(f):
        raise CsPolyError(f"{f} is not a degree-6 CS polynomial")
    c = [f[i] for i in range(6)]
    q = c[5] - c[1]
    p = c[4] - c[2]
    if q < 2:
        raise CsPolyError(f"basicness needs q >= 2, got q = {q}")
    return p + 2 * q in basic_divisors(q, f(1), cs_det(f, 2))


# ---------------------------------------------------------------- tables

def parametric_positivity(row: Degree6Solution, sample=POSITIVITY_SAMPLE) -> str:
    """Positivity of a one-parameter row as "a in Z", "a<=k", "a>=k" or "never".

    Inferred from the exact positivity test on a sample of a; rows whose
    positive set is not a half-line within the sample are reported as an
    explicit list.
    """
    good = [a for a in sample if is_positive(row.instantiate(a))]
    if len(good) == len(sample):
        return "a in Z"
    if not good:
        return "never"
    lo, hi = sample[0], sample[-1]
    if good == list(range(lo, good[-1] + 1)):
        return f"a<={good[-1]}"
    if good == list(range(good[0], hi + 1)):
        return f"a>={good[0]}"
    return "a in {" + ",".join(map(str, good)) + "}"


def positivity_label(row: Degree6Solution) -> str:
    if row.parametric:
        return parametric_positivity(row)
    return "Yes" if is_positive(row.poly()) else "No"


def _table_block(q):
    return [(row, positivity_label(row)) for row in solve_q(q)]


def emit_table(q_lo: int, q_hi: int, workers: int = 1, bound: int | None = None) -> list:
    """Rows (q, Degree6Solution, positivity) for q_lo <= q <= q_hi."""
    if not 0 <= q_lo <= q_hi:
        raise CsPolyError("need 0 <= q_lo <= q_hi")
    _check_budget(q_hi, bound)
    blocks = ordered_map(_table_block, range(q_lo, q_hi + 1), workers)
    return [(q, row, pos) for q, block in zip(range(q_lo, q_hi + 1), blocks) for row, pos in block]


CSV_HEADER = ["q", "c0", "c1", "c2", "c3", "c4", "c5", "positivity"]


def table_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for q, row, pos in rows:
        w.writerow([q] + row.entries() + [pos])
    return buf.getvalue()


def table_json(rows) -> str:
    out = []
    for q, row, pos in rows:
        d = row.to_dict()
        d["positivity"] = pos
        out.append(d)
    return json.dumps({"version": "cspoly.table/1", "rows": out}, sort_keys=True)


# ---------------------------------------------------------------- reference data

@dataclass(frozen=True)
class ReferenceRow:
    q: int
    coeffs: tuple  # ints or ParamPoly
    positivity: str


def _data_rows(name):
    text = resources.files("cspoly.data").joinpath(name).read_text(encoding="utf-8")
    return list(csv.DictReader(io.StringIO(text)))


def errata() -> list:
    """Corrections applied to the literal transcription, one dict per fix."""
    return _data_rows("degree6_reference_errata.csv")


def _apply_errata(rows):
    cols = ["q"] + [f"c{i}" for i in range(6)]
    rows = [dict(r) for r in rows]
    for fix in errata():
        hits = [r for r in rows if all(r[c] == fix[c] for c in cols)]
        if len(hits) != 1:
            raise AssertionError(f"erratum {fix} matches {len(hits)} rows")
        hits[0][fix["field"]] = fix["corrected"]
    return rows


@lru_cache(maxsize=None)
def reference_table(apply_errata: bool = True) -> tuple:
    """The shipped transcription of the degree-6 list for 0 <= q <= 12.

    With ``apply_errata`` the rows listed in ``degree6_reference_errata.csv`` are
    corrected; without it the rows are exactly as printed.
    """
    rows = _data_rows("degree6_reference.csv")
    if apply_errata:
        rows = _apply_errata(rows)
    out = []
    for row in rows:
        coeffs = []
        for i in range(6):
            e = row[f"c{i}"]
            try:
                coeffs.append(int(e))
            except ValueError:
                coeffs.append(ParamPoly.parse(e, ("a",)))
        out.append(ReferenceRow(int(row["q"]), tuple(coeffs), row["positivity"]))
    return tuple(out)


def canonical_reference_csv(apply_errata: bool = True) -> str:
    """The transcription in the emitter's layout: same entry formatting and row order."""
    rows = []
    for r in reference_table(apply_errata):
        parametric = any(isinstance(c, ParamPoly) for c in r.coeffs)
        entries = [str(c) for c in r.coeffs]
        key = (0, tuple(entries)) if parametric else (1, tuple(r.coeffs))
        rows.append((r.q, key, entries, r.positivity))
    rows.sort(key=lambda t: (t[0], t[1]))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for q, _, entries, pos in rows:
        w.writerow([q] + entries + [pos])
    return buf.getvalue()
