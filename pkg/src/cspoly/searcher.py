"""Exhaustive coefficient-box search for CS polynomials of higher degree.

Pipeline per candidate:

1. ``f(1) = +-1`` is imposed while enumerating, by solving one coefficient;
2. a cheap mod-p filter over a short prime list discards most of the rest;
3. whatever survives goes to the exact determinant check, which decides.

The box is cut into slices along the highest-index coefficient.  Slices are
independent, run in a process pool, and are merged in slice order, so the
report does not depend on the worker count.  A plain-text checkpoint holds one
record per finished slice.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from . import config
from .cs_core import is_cs, verify
from .errors import BudgetExceededError, CheckpointError, CsPolyError
from .finite_field import (
    _factor_list,
    _split_roots,
    find_unit_product,
    first_primes,
    is_prime,
    reduce_mod_p,
)
from .intpoly import IntPoly
from .parallel import ordered_imap
from .parampoly import ParamPoly

SEARCH_VERSION = "cspoly.search/1"
CHECKPOINT_MAGIC = "cspoly-checkpoint/1"
DEFAULT_FILTER_PRIMES = 25
AUDIT_EVERY = 10**4
REPORT_WITNESS_BOUND = 10**5


# ---------------------------------------------------------------- search box

@dataclass(frozen=True)
class SearchSpec:
    """Box of c_1..c_{n-1} (c_0 is (-1)^n), filter primes and linear constraints."""

    degree: int
    bounds: tuple
    primes: tuple = field(default_factory=lambda: tuple(first_primes(DEFAULT_FILTER_PRIMES)))
    constraints: tuple = ()
    checkpoint_interval: int = 1

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple(tuple(int(x) for x in b) for b in self.bounds))
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.degree < 2:
            raise CsPolyError(f"degree must be at least 2, got {self.degree}")
        if len(self.bounds) != self.degree - 1:
            raise CsPolyError(f"need {self.degree - 1} bounds (c_1..c_{self.degree - 1}), got {len(self.bounds)}")
        if any(len(b) != 2 for b in self.bounds):
            raise CsPolyError("each bound must be a (lo, hi) pair")
        if not self.primes:
            raise CsPolyError("the filter prime list is empty")
        bad = [p for p in self.primes if not is_prime(p)]
        if bad:
            raise CsPolyError(f"not prime: {bad}")
        if self.checkpoint_interval < 1:
            raise CsPolyError("checkpoint interval must be positive")
        _plan(self)  # parse and check the constraints now

    @classmethod
    def cube(cls, degree, lo, hi, **kw):
        return cls(degree, [(lo, hi)] * (degree - 1), **kw)

    def volume(self) -> int:
        return math.prod(max(0, hi - lo + 1) for lo, hi in self.bounds)

    def key(self) -> dict:
        return {
            "degree": self.degree,
            "bounds": [list(b) for b in self.bounds],
            "primes": list(self.primes),
            "constraints": list(self.constraints),
        }

    def spec_hash(self) -> str:
        blob = json.dumps(self.key(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def with_bounds(self, bounds) -> "SearchSpec":
        return SearchSpec(self.degree, bounds, self.primes, self.constraints, self.checkpoint_interval)


# ---------------------------------------------------------------- constraints

def _parse_constraint(text: str, n: int):
    """``c1+c6=0`` -> (coefficient list over c_1..c_{n-1}, constant) for sum + const = 0."""
    if text.count("=") != 1:
        raise CsPolyError(f"constraint {text!r} must contain exactly one '='")
    names = tuple(f"c{i}" for i in range(1, n))
    lhs, rhs = text.split("=")
    try:
        poly = ParamPoly.parse(lhs, names) - ParamPoly.parse(rhs, names)
    except (ValueError, SyntaxError) as exc:
        raise CsPolyError(f"cannot parse constraint {text!r}: {exc}") from None
    if poly.degree() > 1:
        raise CsPolyError(f"constraint {text!r} is not linear")
    row = []
    for i in range(n - 1):
        mono = [0] * (n - 1)
        mono[i] = 1
        row.append(poly.coefficient(mono))
    return row, poly.coefficient([0] * (n - 1))


@dataclass(frozen=True)
class _Plan:
    """Enumeration plan: free coordinates, affine dependents, and the coordinate
    solved from f(1) = e (``solve``), all as 0-based indices into c_1..c_{n-1}."""

    free: tuple
    dependents: tuple  # (index, const, {free index: coef})
    solve: int | None
    f1_const: Fraction
    f1_coefs: dict


def _plan(spec: SearchSpec) -> _Plan:
    n = spec.degree
    m = n - 1
    rows = [[*r, c] for r, c in (_parse_constraint(t, n) for t in spec.constraints)]
    # reduced row echelon form, pivoting on the highest index first
    pivots = {}
    r = 0
    for col in reversed(range(m)):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                t = rows[i][col]
                rows[i] = [x - t * y for x, y in zip(rows[i], rows[r])]
        pivots[col] = r
        r += 1
    if any(row[-1] for row in rows[r:]):
        raise CsPolyError(f"constraints {list(spec.constraints)} are inconsistent")
    free = tuple(i for i in range(m) if i not in pivots)
    deps = []
    for col in sorted(pivots):
        row = rows[pivots[col]]
        deps.append((col, -row[-1], {j: -row[j] for j in free if row[j]}))
    # f(1) = 1 + c_0 + sum c_i, rewritten in the free coordinates
    const = Fraction(1 + (-1) ** n)
    coefs = {j: Fraction(1) for j in free}
    for _, dc, dcoef in deps:
        const += dc
        for j, v in dcoef.items():
            coefs[j] += v
    coefs = {j: v for j, v in coefs.items() if v}
    solve = max(coefs) if coefs else None
    return _Plan(free, tuple(deps), solve, const, coefs)


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _valid_count(bounds, deps_affine, lo, hi) -> int:
    """Number of integers s in [lo, hi] making every dependent a + b*s an
    integer inside its bounds."""
    integral = True
    for idx, a, b in deps_affine:
        dlo, dhi = bounds[idx]
        if b == 0:
            if not dlo <= a <= dhi:
                return 0
        elif b > 0:
            lo = max(lo, _ceil((dlo - a) / b))
            hi = min(hi, _floor((dhi - a) / b))
        else:
            lo = max(lo, _ceil((dhi - a) / b))
            hi = min(hi, _floor((dlo - a) / b))
        if a.denominator != 1 or b.denominator != 1:
            integral = False
    if hi < lo:
        return 0
    if integral:
        return hi - lo + 1
    return sum(
        all((a + b * s).denominator == 1 for _, a, b in deps_affine) for s in range(lo, hi + 1)
    )


def _candidates(spec: SearchSpec, plan: _Plan):
    """Yield (scanned increment, candidate coefficient tuples) per outer point."""
    n = spec.degree
    bounds = spec.bounds
    c0 = (-1) ** n
    outer = [j for j in plan.free if j != plan.solve]
    ranges = [range(bounds[j][0], bounds[j][1] + 1) for j in outer]
    for point in itertools.product(*ranges):
        vals = dict(zip(outer, point))
        if plan.solve is None:
            deps = [(i, a + sum(c * vals[j] for j, c in co.items())) for i, a, co in plan.dependents]
            ok = all(v.denominator == 1 and bounds[i][0] <= v <= bounds[i][1] for i, v in deps)
            if not ok:
                continue
            full = dict(vals)
            full.update((i, int(v)) for i, v in deps)
            cands = []
            if abs(plan.f1_const) == 1:
                cands.append((c0, *(full[i] for i in range(n - 1)), 1))
            yield 1, cands
            continue
        s = plan.solve
        # dependents as affine functions of the solved coordinate
        affine = []
        for i, a, co in plan.dependents:
            base = a + sum(c * vals[j] for j, c in co.items() if j != s)
            affine.append((i, base, co.get(s, Fraction(0))))
        slo, shi = bounds[s]
        scanned = _valid_count(bounds, affine, slo, shi)
        if not scanned:
            continue
        rest = plan.f1_const + sum(c * vals[j] for j, c in plan.f1_coefs.items() if j != s)
        g = plan.f1_coefs[s]
        cands = []
        for e in (-1, 1):
            sv = (e - rest) / g
            if sv.denominator != 1 or not slo <= sv <= shi:
                continue
            full = dict(vals)
            full[s] = int(sv)
            good = True
            for i, a, b in affine:
                v = a + b * sv
                if v.denominator != 1 or not bounds[i][0] <= v <= bounds[i][1]:
                    good = False
                    break
                full[i] = int(v)
            if good:
                cands.append((c0, *(full[i] for i in range(n - 1)), 1))
        cands.sort()
        yield scanned, cands


def pruned_volume_bound(spec: SearchSpec) -> int:
    """Product of the free-coordinate ranges: an upper bound on the scan size."""
    plan = _plan(spec)
    return math.prod(max(0, spec.bounds[j][1] - spec.bounds[j][0] + 1) for j in plan.free)


# ---------------------------------------------------------------- mod-p disproof

class Disproof(NamedTuple):
    p: int
    k: int
    indices: tuple | None  # root indices whose product is 1 (None from the quick filter)


def modp_disproof(f: IntPoly, primes) -> Disproof | None:
    """First prime in ``primes`` modulo which f is not regular, with k and the
    indices of k roots multiplying to 1.  None only means "not disproved"."""
    if not f.is_doubly_monic():
        raise CsPolyError(f"{f} is not doubly monic")
    if f.degree < 4:
        raise CsPolyError(f"mod-p disproof needs degree >= 4, got {f.degree}")
    for p in primes:
        fp = reduce_mod_p(f, p)
        roots, F = _split_roots(fp)
        for k in range(1, f.degree // 2 + 1):
            hit = find_unit_product(roots, k, F)
            if hit is not None:
                return Disproof(p, k, hit)
    return None


def quick_disproof_k(coeffs, p: int):
    """Smallest k <= n/2 for which f mod p has a factor of degree k whose roots
    multiply to 1, or None.

    Sound but not complete: the full root-product test also catches k-subsets
    that do not form a factor over F_p.
    """
    n = len(coeffs) - 1
    half = n // 2
    fp = [c % p for c in coeffs]
    if fp[-1] != 1:
        raise CsPolyError("quick filter needs a monic polynomial")
    # f(1) = 0 means a root equal to 1
    if sum(fp) % p == 0:
        return 1
    while len(fp) > 1 and fp[-1] == 0:
        fp.pop()
    reach = {(0, 1)}
    for g, e in _factor_list(fp, p):
        d = len(g) - 1
        if d > half:
            continue
        r = (-g[0] if d % 2 else g[0]) % p
        for _ in range(e):
            reach |= {(k + d, prod * r % p) for k, prod in reach if k + d <= half}
    hits = [k for k, prod in reach if k and prod == 1]
    return min(hits) if hits else None


# ---------------------------------------------------------------- slices

@dataclass
class SliceResult:
    index: int
    scanned: int = 0
    candidates: int = 0
    kills: dict = field(default_factory=dict)  # prime -> count
    filter_passed: int = 0
    survivors: list = field(default_factory=list)  # coefficient tuples c_0..c_n
    rejected: list = field(default_factory=list)  # (coeffs, witness dicts)
    audited: int = 0

    def to_record(self) -> str:
        return json.dumps(
            {
                "index": self.index,
                "scanned": self.scanned,
                "candidates": self.candidates,
                "kills": {str(p): c for p, c in sorted(self.kills.items())},
                "filter_passed": self.filter_passed,
                "survivors": [list(s) for s in self.survivors],
                "rejected": [[list(c), w] for c, w in self.rejected],
                "audited": self.audited,
            },
            sort_keys=True,
            separators=(",", ":"),
        )

    @classmethod
    def from_record(cls, text: str) -> "SliceResult":
        d = json.loads(text)
        return cls(
            d["index"],
            d["scanned"],
            d["candidates"],
            {int(p): c for p, c in d["kills"].items()},
            d["filter_passed"],
            [tuple(s) for s in d["survivors"]],
            [(tuple(c), w) for c, w in d["rejected"]],
            d["audited"],
        )


def _scan_slice(args) -> SliceResult:
    spec, index, audit_every = args
    out = SliceResult(index)
    if spec.volume() == 0:
        return out
    plan = _plan(spec)
    filtered = 0
    for scanned, cands in _candidates(spec, plan):
        out.scanned += scanned
        for coeffs in cands:
            out.candidates += 1
            killer = None
            for p in spec.primes:
                if quick_disproof_k(coeffs, p) is not None:
                    killer = p
                    break
            f = IntPoly(coeffs)
            if killer is not None:
                out.kills[killer] = out.kills.get(killer, 0) + 1
                if audit_every and filtered % audit_every == 0:
                    if is_cs(f):
                        raise AssertionError(f"filter rejected CS polynomial {f} at p={killer}")
                    out.audited += 1
                filtered += 1
                continue
            out.filter_passed += 1
            rep = verify(f, witness_bound=REPORT_WITNESS_BOUND)
            if rep.is_cs:
                out.survivors.append(coeffs)
            else:
                out.rejected.append((coeffs, [w.to_json() for w in rep.witnesses]))
    out.survivors.sort()
    out.rejected.sort()
    return out


def partition(spec: SearchSpec, worker_count: int) -> list:
    """Split the box along c_{n-1} into ``worker_count`` contiguous slices.

    Slice sizes differ by at most one value of c_{n-1}; slices may be empty
    (hi < lo) when there are more workers than values.
    """
    if worker_count < 1:
        raise CsPolyError("worker_count must be at least 1")
    lo, hi = spec.bounds[-1]
    side = max(0, hi - lo + 1)
    base, extra = divmod(side, worker_count)
    out = []
    start = lo
    for i in range(worker_count):
        size = base + (1 if i < extra else 0)
        out.append(spec.bounds[:-1] + ((start, start + size - 1),))
        start += size
    return out


# ---------------------------------------------------------------- checkpoints

@dataclass
class Checkpoint:
    spec_hash: str
    completed: dict = field(default_factory=dict)  # slice index -> SliceResult

    @property
    def last_index(self):
        return max(self.completed) if self.completed else None

    @staticmethod
    def _digest(text: str) -> str:
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    @classmethod
    def load(cls, path) -> "Checkpoint":
        """Read a checkpoint.  An unterminated last line (an interrupted write)
        is dropped; anything else malformed raises CheckpointError."""
        with open(path, encoding="utf-8") as fh:
            data = fh.read()
        lines = data.split("\n")
        if lines and lines[-1] != "":
            lines = lines[:-1]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise CheckpointError(f"{path}: empty checkpoint")
        head = lines[0].split(" ")
        if len(head) != 2 or head[0] != CHECKPOINT_MAGIC:
            raise CheckpointError(f"{path}: bad header {lines[0]!r}")
        cp = cls(head[1])
        for no, line in enumerate(lines[1:], start=2):
            parts = line.split(" ")
            if len(parts) != 3 or parts[0] != "slice":
                raise CheckpointError(f"{path}:{no}: malformed record")
            if cls._digest(parts[1]) != parts[2]:
                raise CheckpointError(f"{path}:{no}: checksum mismatch")
            try:
                rec = SliceResult.from_record(parts[1])
            except (ValueError, KeyError, TypeError) as exc:
                raise CheckpointError(f"{path}:{no}: {exc}") from None
            if rec.index in cp.completed:
                raise CheckpointError(f"{path}:{no}: slice {rec.index} recorded twice")
            cp.completed[rec.index] = rec
        return cp


class _CheckpointWriter:
    def __init__(self, path, spec_hash, interval, fresh):
        self.interval = interval
        self.pending = 0
        if not fresh:
            # drop a torn trailing record before appending to it
            with open(path, "rb+") as fh:
                data = fh.read()
                fh.truncate(data.rfind(b"\n") + 1)
        self.fh = open(path, "w" if fresh else "a", encoding="utf-8")
        if fresh:
            self.fh.write(f"{CHECKPOINT_MAGIC} {spec_hash}\n")
            self._sync()

    def write(self, rec: SliceResult):
        body = rec.to_record()
        self.fh.write(f"slice {body} {Checkpoint._digest(body)}\n")
        self.pending += 1
        if self.pending >= self.interval:
            self._sync()

    def _sync(self):
        self.fh.flush()
        os.fsync(self.fh.fileno())
        self.pending = 0

    def close(self):
        self._sync()
        self.fh.close()


# ---------------------------------------------------------------- report

@dataclass(frozen=True)
class SearchReport:
    spec: SearchSpec
    scanned: int
    candidates: int
    kills: dict
    filter_passed: int
    survivors: tuple
    rejected: tuple
    audited: int
    elapsed: float = 0.0
    slices: int = 0
    resumed_slices: int = 0

    @property
    def filtered(self) -> int:
        return sum(self.kills.values())

    @property
    def filter_effectiveness(self):
        """Fraction of non-CS candidates removed by the mod-p filter."""
        non_cs = self.candidates - len(self.survivors)
        return self.filtered / non_cs if non_cs else None

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "version": SEARCH_VERSION,
            "spec": self.spec.key(),
            "scanned": self.scanned,
            "candidates": self.candidates,
            "filter": {
                "kills": {str(p): self.kills.get(p, 0) for p in self.spec.primes},
                "passed": self.filter_passed,
                "effectiveness": self.filter_effectiveness,
                "audited": self.audited,
            },
            "survivors": [[str(c) for c in f.to_desc()] for f in self.survivors],
            "rejected_after_filter": [
                {"coeffs": [str(c) for c in IntPoly(c).to_desc()], "witnesses": w}
                for c, w in self.rejected
            ],
        }
        if timing:
            out["timing"] = {
                "elapsed_s": round(self.elapsed, 3),
                "candidates_per_s": round(self.candidates / self.elapsed, 1) if self.elapsed else None,
                "slices": self.slices,
                "resumed_slices": self.resumed_slices,
            }
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)

    def survivors_csv(self) -> str:
        n = self.spec.degree
        lines = [",".join(f"c{i}" for i in range(n + 1))]
        lines += [",".join(str(c) for c in f.coeffs) for f in self.survivors]
        return "\n".join(lines) + "\n"


def _merge(spec, results, elapsed, resumed) -> SearchReport:
    kills = {p: 0 for p in spec.primes}
    survivors, rejected = [], []
    scanned = candidates = passed = audited = 0
    for r in sorted(results, key=lambda r: r.index):
        scanned += r.scanned
        candidates += r.candidates
        passed += r.filter_passed
        audited += r.audited
        for p, c in r.kills.items():
            kills[p] += c
        survivors.extend(r.survivors)
        rejected.extend(r.rejected)
    survivors.sort()
    rejected.sort()
    return SearchReport(
        spec, scanned, candidates, kills, passed,
        tuple(IntPoly(c) for c in survivors), tuple(rejected), audited,
        elapsed, len(results), resumed,
    )


def box_search(
    spec: SearchSpec,
    workers: int = 1,
    checkpoint=None,
    resume: bool = False,
    budget=None,
    audit_every: int = AUDIT_EVERY,
) -> SearchReport:
    """Scan the box and return every CS polynomial in it.

    The work is cut into one slice per value of c_{n-1} regardless of
    ``workers``, which keeps results and checkpoints independent of the pool
    size.  ``audit_every`` re-checks every N-th filtered candidate exactly
    (1 = all of them, 0 = none).
    """
    t0 = time.perf_counter()
    limit = config.budget(budget)
    vol = pruned_volume_bound(spec)
    if vol > limit:
        raise BudgetExceededError(f"pruned box volume {vol} exceeds budget {limit}", vol)
    side = max(1, spec.bounds[-1][1] - spec.bounds[-1][0] + 1)
    slices = partition(spec, side)

    done = {}
    writer = None
    if checkpoint is not None:
        exists = os.path.exists(checkpoint)
        if exists and not resume:
            raise CheckpointError(f"{checkpoint} exists; resume it or remove it")
        if exists:
            cp = Checkpoint.load(checkpoint)
            if cp.spec_hash != spec.spec_hash():
                raise CheckpointError(f"{checkpoint} belongs to a different search")
            bad = [i for i in cp.completed if not 0 <= i < len(slices)]
            if bad:
                raise CheckpointError(f"{checkpoint} names unknown slices {bad}")
            done = dict(cp.completed)
        writer = _CheckpointWriter(checkpoint, spec.spec_hash(), spec.checkpoint_interval, not exists)

    todo = [(spec.with_bounds(b), i, audit_every) for i, b in enumerate(slices) if i not in done]
    results = list(done.values())
    try:
        for res in ordered_imap(_scan_slice, todo, workers):
            results.append(res)
            if writer is not None:
                writer.write(res)
    finally:
        if writer is not None:
            writer.close()
    return _merge(spec, results, time.perf_counter() - t0, len(done))
