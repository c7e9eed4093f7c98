"""Exact integer polynomials and matrices.

Polynomials are dense with ascending coefficients: ``IntPoly((1, -1, 0, 0, 1))``
is ``x^4 - x + 1``.  Matrices are tuples of rows.  Everything here is exact;
Python integers never overflow, and no floating point is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd

from .errors import CsPolyError, NotDoublyMonicError, NotMonicError


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class IntPoly:
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(int(c) for c in self.coeffs))

    @classmethod
    def from_desc(cls, coeffs) -> "IntPoly":
        """Build from coefficients listed from the leading term down."""
        return cls(tuple(reversed(list(coeffs))))

    @classmethod
    def x(cls) -> "IntPoly":
        return cls((0, 1))

    def to_desc(self) -> list:
        return list(reversed(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __iter__(self):
        # explicit, so iteration stops at the leading term instead of using __getitem__
        return iter(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def is_doubly_monic(self) -> bool:
        return self.is_monic() and self.coeffs[0] == (-1) ** self.degree

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = IntPoly((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod_monic(self, divisor: "IntPoly"):
        """Quotient and remainder on division by a monic polynomial."""
        if not divisor.is_monic():
            raise NotMonicError("divisor must be monic")
        rem = list(self.coeffs)
        d = divisor.degree
        if len(rem) - 1 < d:
            return IntPoly(()), self
        quot = [0] * (len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c:
                quot[i - d] = c
                for j, b in enumerate(divisor.coeffs):
                    rem[i - d + j] -= c * b
        return IntPoly(quot), IntPoly(rem[:d])

    def derivative(self) -> "IntPoly":
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def __str__(self):
        return format_poly(self.coeffs)

    def __repr__(self):
        return f"IntPoly({self})"


def _as_poly(obj) -> IntPoly:
    if isinstance(obj, IntPoly):
        return obj
    if isinstance(obj, int):
        return IntPoly((obj,))
    return NotImplemented


def format_poly(coeffs, var="x") -> str:
    """Render ascending coefficients as ``x^2 - 3x + 1``."""
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise CsPolyError("matrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def order(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        cols = list(zip(*other.rows))
        return IntMatrix(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows
        )

    def scaled_diagonal_shift(self, t: int) -> "IntMatrix":
        """Return ``t*I - self``."""
        n = self.order
        return IntMatrix(
            tuple((t if i == j else 0) - self.rows[i][j] for j in range(n))
            for i in range(n)
        )

    def det(self) -> int:
        return det(self)


def companion(f: IntPoly) -> IntMatrix:
    """Companion matrix with superdiagonal ones and last row ``-c_0 .. -c_{n-1}``."""
    if not f.is_monic() or f.degree < 1:
        raise NotMonicError(f"companion matrix needs a monic polynomial of degree >= 1, got {f}")
    n = f.degree
    rows = []
    for i in range(n - 1):
        rows.append(tuple(int(j == i + 1) for j in range(n)))
    rows.append(tuple(-f[j] for j in range(n)))
    return IntMatrix(tuple(rows))


def _bareiss(rows) -> int:
    # rows is consumed (mutated in place)
    n = len(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = rows[k][k]
        rk = rows[k][k + 1:]
        for i in range(k + 1, n):
            ri = rows[i]
            rik = ri[k]
            if rik == 0 and prev == 1:
                ri[k + 1:] = [a * pivot for a in ri[k + 1:]]
                continue
            ri[k + 1:] = [(a * pivot - rik * b) // prev for a, b in zip(ri[k + 1:], rk)]
        prev = pivot
    return sign * rows[n - 1][n - 1]


def det(m) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    rows = m.rows if isinstance(m, IntMatrix) else m
    return _bareiss([list(r) for r in rows])


def exterior_power_matrix(m: IntMatrix, k: int) -> IntMatrix:
    """k-th exterior power: entry (S, T) is the minor on rows S, columns T.

    Index subsets are ordered lexicographically.
    """
    n = m.order
    if not 1 <= k <= n:
        raise CsPolyError(f"k must lie in 1..{n}, got {k}")
    if k == 1:
        return m
    subsets = list(combinations(range(n), k))
    rows = m.rows
    out = []
    for s in subsets:
        picked = [rows[i] for i in s]
        out.append(tuple(
            _bareiss([[r[j] for j in t] for r in picked]) for t in subsets
        ))
    return IntMatrix(tuple(out))


def char_poly(m: IntMatrix) -> IntPoly:
    """det(xI - M) by evaluation at x = 0..N and exact interpolation."""
    n = m.order
    values = [det(m.scaled_diagonal_shift(t)) for t in range(n + 1)]
    # Newton forward differences at the points 0, 1, ..., n
    diffs = []
    row = values
    for _ in range(n + 1):
        diffs.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    result = IntPoly(())
    falling = IntPoly((1,))
    fact = 1
    for k, d in enumerate(diffs):
        if k:
            fact *= k
            falling = falling * IntPoly((-(k - 1), 1))
        q, r = divmod(d, fact)
        assert r == 0, "interpolated characteristic polynomial is not integral"
        result = result + falling * q
    assert result.is_monic() and result.degree == n
    return result


def exterior_power_poly(f: IntPoly, k: int) -> IntPoly:
    """Characteristic polynomial of the k-th exterior power of any matrix realizing f."""
    if not 1 <= k <= f.degree:
        raise CsPolyError(f"k must lie in 1..{f.degree}, got {k}")
    if k == 1:
        return f
    return char_poly(exterior_power_matrix(companion(f), k))


def signed_reciprocal(f: IntPoly) -> IntPoly:
    """f*(x) = (-1)^n x^n f(1/x); the characteristic polynomial of A^-1."""
    if not f.is_doubly_monic():
        raise NotDoublyMonicError(f"signed reciprocal needs a doubly monic polynomial, got {f}")
    n = f.degree
    s = (-1) ** n
    return IntPoly(s * f[n - i] for i in range(n + 1))


def _primitive(coeffs):
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    return [c // g for c in coeffs] if g > 1 else list(coeffs)


def _prem(a, b):
    """Pseudo-remainder of ascending lists: lc(b)^(deg a - deg b + 1) * a mod b."""
    a = list(a)
    db = len(b) - 1
    lc = b[-1]
    for _ in range(len(a) - db):
        if a and len(a) - 1 >= db:
            c = a[-1]
            shift = len(a) - 1 - db
            a = [lc * x for x in a]
            for j, y in enumerate(b):
                a[shift + j] -= c * y
            while a and a[-1] == 0:
                a.pop()
        else:
            a = [lc * x for x in a]
    return a


def sturm_chain(f: IntPoly) -> list:
    """Sturm sequence of f, each member scaled by a positive constant."""
    chain = [list(f.coeffs), list(f.derivative().coeffs)]
    while chain[-1] and len(chain[-1]) > 1:
        a, b = chain[-2], chain[-1]
        delta = len(a) - len(b) + 1
        r = _prem(a, b)
        if not r:
            break
        # prem = lc(b)^delta * rem, and the Sturm step wants -rem
        if b[-1] > 0 or delta % 2 == 0:
            r = [-c for c in r]
        chain.append(_primitive(r))
    return [c for c in chain if c]


def _sign_changes(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sgn(v):
    return (v > 0) - (v < 0)


def count_positive_real_roots(f: IntPoly) -> int:
    """Number of distinct real roots in the open interval (0, inf)."""
    if f.is_zero():
        raise CsPolyError("the zero polynomial has no finite root count")
    coeffs = list(f.coeffs)
    while coeffs[0] == 0:
        coeffs.pop(0)
    g = IntPoly(coeffs)
    if g.degree == 0:
        return 0
    chain = sturm_chain(g)
    at_zero = _sign_changes([_sgn(c[0]) for c in chain])
    at_inf = _sign_changes([_sgn(c[-1]) for c in chain])
    return at_zero - at_inf


def is_positive(f: IntPoly) -> bool:
    """True iff (-1)^n f(t) > 0 for every t < 0."""
    if not f.is_doubly_monic():
        raise NotDoublyMonicError(f"positivity is defined for doubly monic polynomials, got {f}")
    n = f.degree
    s = (-1) ** n
    g = IntPoly(s * (-1) ** i * c for i, c in enumerate(f.coeffs))
    return count_positive_real_roots(g) == 0
