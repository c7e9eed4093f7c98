"""Parametric tables of Cappell-Shaneson polynomials for degrees 2 through 7.

The rows live in ``data/families.csv``; each entry is an integer polynomial
in the row's parameters (``a``, ``b`` or ``q``).  Degrees 2-5 tables are
complete, so ``classify`` can place any CS polynomial of those degrees.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from . import config
from .cs_core import is_cs
from .errors import BudgetExceededError, CsPolyError
from .intpoly import IntPoly, is_positive
from .parallel import ordered_map
from .parampoly import ParamPoly

ALL_PARAMS = ("a", "b", "q")


@dataclass(frozen=True)
class Family:
    id: str
    degree: int
    params: tuple
    coeffs: tuple  # ParamPoly entries c_0 .. c_{n-1}
    positivity: str

    def entry_strings(self) -> list:
        return [str(c) for c in self.coeffs]


@dataclass(frozen=True)
class Classification:
    family_id: str
    params: tuple  # sorted (name, value) pairs

    def as_dict(self) -> dict:
        return dict(self.params)


def _read_data(name: str) -> str:
    return resources.files("cspoly.data").joinpath(name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def _load() -> tuple:
    out = []
    for row in csv.DictReader(io.StringIO(_read_data("families.csv"))):
        params = tuple(row["params"].split())
        variables = params or ("a",)
        coeffs = tuple(ParamPoly.parse(e, variables) for e in row["coeffs"].split(";"))
        degree = int(row["degree"])
        if len(coeffs) != degree:
            raise AssertionError(f"row {row['id']} has {len(coeffs)} entries for degree {degree}")
        out.append(Family(row["id"], degree, params, coeffs, row["positivity"]))
    return tuple(out)


def catalog(degree: int) -> list:
    if not 2 <= degree <= 7:
        raise CsPolyError(f"catalog covers degrees 2..7, got {degree}")
    return [f for f in _load() if f.degree == degree]


def get_family(family_id: str) -> Family:
    for f in _load():
        if f.id == family_id:
            return f
    raise CsPolyError(f"unknown family {family_id!r}")


def _check_params(family: Family, params: dict):
    given = set(params)
    want = set(family.params)
    if given != want:
        raise CsPolyError(
            f"{family.id} takes parameters {sorted(want)}, got {sorted(given)}"
        )


def instantiate(family: Family, params=None) -> IntPoly:
    params = dict(params or {})
    _check_params(family, params)
    values = {v: params.get(v, 0) for v in (family.params or ("a",))}
    coeffs = [c.evaluate_int(**values) for c in family.coeffs]
    return IntPoly(tuple(coeffs) + (1,))


def _compare(desc: str, value: int) -> bool:
    for op in ("<=", ">="):
        if op in desc:
            rhs = int(desc.split(op)[1])
            return value <= rhs if op == "<=" else value >= rhs
    raise CsPolyError(f"bad positivity descriptor {desc!r}")


def positivity_holds(family: Family, params=None) -> bool:
    """Positivity of an instance: the row's exact condition when it has one,
    otherwise a direct root-count check of the instantiated polynomial."""
    params = dict(params or {})
    _check_params(family, params)
    desc = family.positivity
    if desc == "always":
        return True
    if desc == "never":
        return False
    if desc == "computed":
        return is_positive(instantiate(family, params))
    var = desc[0]
    return _compare(desc, params[var])


# ---------------------------------------------------------------- classify

def _solve_linear(rows, ncols):
    """Unique solution of an exact linear system, or None (inconsistent or
    underdetermined).  rows: list of (coeff list, rhs)."""
    m = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                t = m[i][c]
                m[i] = [x - t * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(m)):
        if m[i][-1] != 0:
            return None
    if len(pivots) < ncols:
        return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = m[i][-1]
    return sol


def match_family(family: Family, f: IntPoly):
    """Integer parameters with instantiate(family, params) == f, or None."""
    if f.degree != family.degree:
        return None
    target = [f[i] for i in range(family.degree)]
    if not family.params:
        return {} if all(c.evaluate_int(a=0) == t for c, t in zip(family.coeffs, target)) else None
    monos = sorted({m for c in family.coeffs for m in c.terms if sum(m) > 0})
    rows = []
    for c, t in zip(family.coeffs, target):
        const = c.coefficient((0,) * len(family.params))
        rows.append(([c.coefficient(m) for m in monos], t - const))
    sol = _solve_linear(rows, len(monos))
    if sol is None:
        return None
    params = {}
    for m, v in zip(monos, sol):
        if sum(m) == 1:
            params[family.params[m.index(1)]] = v
    if set(params) != set(family.params) or any(v.denominator != 1 for v in params.values()):
        return None
    params = {k: int(v) for k, v in params.items()}
    return params if instantiate(family, params) == f else None


def classify(f: IntPoly):
    """Family and parameters of a CS polynomial of degree 2..5; None if f is not CS."""
    if not 2 <= f.degree <= 5:
        raise CsPolyError(f"classification is only complete for degrees 2..5, got {f.degree}")
    if not f.is_doubly_monic():
        raise CsPolyError(f"{f} is not doubly monic")
    if not is_cs(f):
        return None
    hits = []
    for fam in catalog(f.degree):
        params = match_family(fam, f)
        if params is not None:
            hits.append(Classification(fam.id, tuple(sorted(params.items()))))
    if not hits:
        raise AssertionError(f"{f} is CS but matches no table row")
    return min(hits, key=lambda c: (c.family_id, c.params))


# ---------------------------------------------------------------- enumeration

def _normalize_box(degree, box):
    if len(box) == 2 and all(isinstance(x, int) for x in box):
        return [tuple(box)] * (degree - 1)
    box = [tuple(b) for b in box]
    if len(box) != degree - 1:
        raise CsPolyError(f"need {degree - 1} coefficient intervals, got {len(box)}")
    return box


def _enumerate_slice(args):
    degree, box = args
    c0 = (-1) ** degree
    out = []
    inner = box[:-1]
    lo, hi = box[-1]
    for mid in itertools.product(*(range(a, b + 1) for a, b in inner)):
        rest = 1 + c0 + sum(mid)
        for top in sorted({e - rest for e in (1, -1)}):
            if lo <= top <= hi:
                f = IntPoly((c0,) + mid + (top, 1))
                if is_cs(f):
                    out.append(f)
    return out


def brute_force_enumerate(degree: int, box, budget=None, workers: int = 1) -> list:
    """Every CS polynomial with (c_1, ..., c_{n-1}) in the box, lexicographic order.

    ``box`` is one (lo, hi) pair for all coefficients or one pair per
    coefficient c_1..c_{n-1}.  The top coefficient is solved from f(1) = +-1.
    """
    if degree < 2:
        raise CsPolyError("degree must be at least 2")
    box = _normalize_box(degree, box)
    volume = 1
    for lo, hi in box:
        volume *= max(0, hi - lo + 1)
    limit = config.budget(budget)
    if volume > limit:
        raise BudgetExceededError(f"box volume {volume} exceeds budget {limit}", volume)
    if volume == 0:
        return []
    if len(box) == 1:
        tasks = [(degree, box)]
    else:
        lo, hi = box[0]
        tasks = [(degree, [(v, v)] + box[1:]) for v in range(lo, hi + 1)]
    return [f for part in ordered_map(_enumerate_slice, tasks, workers) for f in part]


# ---------------------------------------------------------------- degree 7 closed forms

# det(I - wedge^3 A) for f = x^7 + c6 x^6 + ... + c1 x - 1 with c1 + c6 = c2 + c5 = 0,
# as a polynomial in c1, c2, c3; keyed by f(1) = c1 + ... + c6, which is also det(I - wedge^2 A).
_DEG7_VARS = ("c1", "c2", "c3")


@lru_cache(maxsize=None)
def _deg7_rows() -> dict:
    rows = csv.DictReader(io.StringIO(_read_data("deg7_closed_forms.csv")))
    return {int(r["eps1"]): (int(r["det2"]), r["det3"]) for r in rows}


@lru_cache(maxsize=None)
def _deg7_form(eps: int) -> ParamPoly:
    return ParamPoly.parse(_deg7_rows()[eps][1], _DEG7_VARS)


def degree7_dets(f: IntPoly) -> tuple:
    """(det(I - wedge^2 A), det(I - wedge^3 A)) from the closed forms.

    Only valid for c0 = -1, c1 + c6 = c2 + c5 = 0 and c1 + ... + c6 = +-1.
    """
    if f.degree != 7 or f[0] != -1 or f[1] + f[6] or f[2] + f[5]:
        raise CsPolyError(f"{f} is not of the form x^7 + ... - 1 with c1 + c6 = c2 + c5 = 0")
    eps = sum(f[i] for i in range(1, 7))
    if eps not in (1, -1):
        raise CsPolyError(f"need c1 + ... + c6 = +-1, got {eps}")
    det2 = _deg7_rows()[eps][0]
    return det2, _deg7_form(eps).evaluate_int(c1=f[1], c2=f[2], c3=f[3])
