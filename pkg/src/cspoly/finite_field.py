"""Polynomials over prime fields F_p and roots in extensions F_{p^m}.

Low-level routines work on ascending coefficient lists of residues in
``[0, p)`` with no trailing zeros (``[]`` is the zero polynomial).  ``FpPoly``
wraps such a list together with its modulus for the public API.

Factorization follows the usual pipeline: square-free decomposition,
distinct-degree factorization, then Cantor-Zassenhaus equal-degree splitting
driven by a seeded ``random.Random`` so that results are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations
from math import lcm

from .errors import CsPolyError, NotDoublyMonicError, NotMonicError, UndecidedError
from .intpoly import IntPoly, IntMatrix, companion, det, exterior_power_matrix

DEFAULT_SEED = 20240929
PRIMITIVE_TRIAL_BOUND = 10**7

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n < 3.3 * 10**24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    if n >= 3_317_044_064_679_887_385_961_981:
        raise UndecidedError(f"primality of {n} is outside the deterministic range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def first_primes(count: int) -> list:
    out = []
    n = 2
    while len(out) < count:
        if is_prime(n):
            out.append(n)
        n += 1
    return out


def trial_factor(n: int, bound: int) -> dict:
    """Prime factorization of n > 0 by trial division up to ``bound``.

    A leftover cofactor is accepted when it is provably prime; otherwise
    ``UndecidedError`` is raised.
    """
    factors = {}
    d = 2
    while d * d <= n and d <= bound:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if d * d > n or is_prime(n):
            factors[n] = factors.get(n, 0) + 1
        else:
            pw = perfect_power(n)
            if pw is None:
                raise UndecidedError(f"cofactor {n} not factored within trial bound {bound}")
            root, e = pw
            for q, k in trial_factor(root, bound).items():
                factors[q] = factors.get(q, 0) + k * e
    return factors


def iroot(n: int, e: int) -> int:
    """Floor of the e-th root of n >= 0."""
    if n < 2:
        return n
    r = 1 << -(-n.bit_length() // e)  # an upper bound
    while True:
        s = ((e - 1) * r + n // r ** (e - 1)) // e
        if s >= r:
            break
        r = s
    while r**e > n:
        r -= 1
    while (r + 1) ** e <= n:
        r += 1
    return r


def perfect_power(n: int):
    """(r, e) with r**e == n and e >= 2 as large as possible, or None."""
    for e in range(n.bit_length(), 1, -1):
        r = iroot(n, e)
        if r > 1 and r**e == n:
            return r, e
    return None


# ---------------------------------------------------------------- list level

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def _sub(a, b, p):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _scale(a, c, p):
    c %= p
    return _trim([x * c % p for x in a]) if c else []


def _mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    inv = pow(b[-1], -1, p)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _trim(q), _trim(a[:db])


def _rem(a, b, p):
    db = len(b) - 1
    if len(a) - 1 < db:
        return list(a)
    a = list(a)
    lc = b[-1]
    if lc == 1:
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i]
            if c:
                base = i - db
                for j in range(db):
                    a[base + j] = (a[base + j] - c * b[j]) % p
        return _trim(a[:db])
    return _divmod(a, b, p)[1]


def _monic(a, p):
    if not a or a[-1] == 1:
        return list(a)
    return _scale(a, pow(a[-1], -1, p), p)


def _gcd(a, b, p):
    while b:
        a, b = b, _rem(a, b, p)
    return _monic(a, p)


def _mulmod(a, b, m, p):
    return _rem(_mul(a, b, p), m, p)


def _powmod(a, e, m, p):
    result = [1]
    base = _rem(a, m, p)
    while e:
        if e & 1:
            result = _mulmod(result, base, m, p)
        e >>= 1
        if e:
            base = _mulmod(base, base, m, p)
    return result if len(m) > 1 else []


def _deriv(a, p):
    return _trim([i * c % p for i, c in enumerate(a)][1:])


def _eval(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


# ---------------------------------------------------------------- FpPoly

@dataclass(frozen=True)
class FpPoly:
    p: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_trim([int(c) % self.p for c in self.coeffs])))

    @classmethod
    def from_desc(cls, p, coeffs) -> "FpPoly":
        return cls(p, tuple(reversed(list(coeffs))))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def is_doubly_monic(self) -> bool:
        return self.is_monic() and self.coeffs[0] == (-1) ** self.degree % self.p

    def monic(self) -> "FpPoly":
        return FpPoly(self.p, _monic(list(self.coeffs), self.p))

    def __call__(self, x):
        return _eval(self.coeffs, x, self.p)

    def _wrap(self, coeffs):
        return FpPoly(self.p, coeffs)

    def __add__(self, other):
        return self._wrap(_add(list(self.coeffs), list(other.coeffs), self.p))

    def __sub__(self, other):
        return self._wrap(_sub(self.coeffs, other.coeffs, self.p))

    def __mul__(self, other):
        return self._wrap(_mul(self.coeffs, other.coeffs, self.p))

    def __pow__(self, e):
        out = FpPoly(self.p, (1,))
        for _ in range(e):
            out = out * self
        return out

    def __divmod__(self, other):
        q, r = _divmod(self.coeffs, other.coeffs, self.p)
        return self._wrap(q), self._wrap(r)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def gcd(self, other) -> "FpPoly":
        return self._wrap(_gcd(list(self.coeffs), list(other.coeffs), self.p))

    def derivative(self) -> "FpPoly":
        return self._wrap(_deriv(self.coeffs, self.p))

    def lift(self) -> IntPoly:
        """Integer polynomial with coefficients in [0, p)."""
        return IntPoly(self.coeffs)

    def __str__(self):
        from .intpoly import format_poly
        return format_poly(self.coeffs).replace(" ", "")

    def __repr__(self):
        return f"FpPoly(p={self.p}, {self})"


def reduce_mod_p(f: IntPoly, p: int) -> FpPoly:
    if not is_prime(p):
        raise CsPolyError(f"{p} is not prime")
    return FpPoly(p, f.coeffs)


# ---------------------------------------------------------------- factoring

def _sqf_list(f, p):
    """Square-free decomposition of a monic f: list of (g, multiplicity)."""
    out = []
    df = _deriv(f, p)
    if not df:
        root = [f[i] for i in range(0, len(f), p)]
        return [(g, e * p) for g, e in _sqf_list(root, p)]
    c = _gcd(f, df, p)
    w = _divmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = _gcd(w, c, p)
        fac = _divmod(w, y, p)[0]
        if len(fac) > 1:
            out.append((fac, i))
        w = y
        c = _divmod(c, y, p)[0]
        i += 1
    if len(c) > 1:
        root = [c[j] for j in range(0, len(c), p)]
        out.extend((g, e * p) for g, e in _sqf_list(root, p))
    return out


def _ddf(f, p):
    """Distinct-degree factorization of a square-free monic f."""
    out = []
    h = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = _powmod(h, p, f, p)
        g = _gcd(f, _sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, d))
            f = _divmod(f, g, p)[0]
            h = _rem(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _edf(f, d, p, rng):
    """Split a monic product of degree-d irreducibles into its factors."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = _trim([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        if p == 2:
            t = list(a)
            acc = list(a)
            for _ in range(d - 1):
                t = _mulmod(t, t, f, p)
                acc = _add(acc, t, p)
            b = acc
        else:
            b = _sub(_powmod(a, (p**d - 1) // 2, f, p), [1], p)
        g = _gcd(f, b, p)
        if 1 < len(g) < len(f):
            break
    return _edf(g, d, p, rng) + _edf(_divmod(f, g, p)[0], d, p, rng)


def _factor_list(f, p, seed=DEFAULT_SEED):
    """Monic irreducible factors of a monic f with multiplicities, sorted."""
    rng = random.Random(seed)
    counts = {}
    for g, e in _sqf_list(f, p):
        for h, d in _ddf(g, p):
            for irr in _edf(h, d, p, rng):
                key = tuple(irr)
                counts[key] = counts.get(key, 0) + e
    return sorted(((list(k), e) for k, e in counts.items()),
                  key=lambda t: (len(t[0]), t[0][::-1]))


def factor(f: FpPoly, seed: int = DEFAULT_SEED) -> list:
    """Monic irreducible factors of f with multiplicities.

    The product of the factors (with multiplicity) times ``f.leading`` is f.
    Ordering is by degree, then by coefficients from the top down.
    """
    if f.is_zero():
        raise CsPolyError("cannot factor the zero polynomial")
    p = f.p
    if f.degree == 0:
        return []
    return [(FpPoly(p, g), e) for g, e in _factor_list(_monic(list(f.coeffs), p), p, seed)]


def format_factorization(factors) -> str:
    parts = []
    for g, e in factors:
        s = f"({g})"
        parts.append(s if e == 1 else f"{s}^{e}")
    return "".join(parts) if parts else "1"


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(f, p):
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    x = [0, 1]
    powers = {}
    h = x
    for j in range(1, n + 1):
        h = _powmod(h, p, f, p)
        powers[j] = h
    if _sub(powers[n], x, p):
        return False
    for ell in _prime_divisors(n):
        if len(_gcd(f, _sub(powers[n // ell], x, p), p)) > 1:
            return False
    return True


def is_irreducible(f: FpPoly) -> bool:
    """Rabin's test: x^(p^n) = x mod f and gcd(x^(p^(n/l)) - x, f) = 1 for primes l | n."""
    if f.degree < 1:
        raise CsPolyError("irreducibility is undefined for constants")
    return _is_irreducible(_monic(list(f.coeffs), f.p), f.p)


def is_primitive(f: FpPoly, bound: int = PRIMITIVE_TRIAL_BOUND) -> bool:
    """True iff a root of the irreducible f generates F_{p^n}^*."""
    if f.degree < 1 or f.coeffs[0] == 0:
        raise CsPolyError("primitivity needs a nonconstant polynomial with nonzero constant term")
    p = f.p
    g = _monic(list(f.coeffs), p)
    if not _is_irreducible(g, p):
        raise CsPolyError(f"{f} is not irreducible over F_{p}")
    order = p ** (len(g) - 1) - 1
    for ell in trial_factor(order, bound):
        if _powmod([0, 1], order // ell, g, p) == [1]:
            return False
    return True


def splitting_degree(f: FpPoly) -> int:
    """Least m such that f splits into linear factors over F_{p^m}."""
    if f.is_zero():
        raise CsPolyError("the zero polynomial has no splitting field")
    m = 1
    for g, _ in factor(f):
        m = lcm(m, g.degree)
    return m


# ---------------------------------------------------------------- extensions

def _binomials_can_be_irreducible(p, m):
    # x^m - a is irreducible over F_p for some a iff every prime dividing m
    # divides p - 1, and additionally p = 1 mod 4 when 4 | m.
    if any((p - 1) % ell for ell in _prime_divisors(m)):
        return False
    return m % 4 != 0 or p % 4 == 1


@lru_cache(maxsize=None)
def _smallest_irreducible(p, m):
    start = 0
    if m > 1 and not _binomials_can_be_irreducible(p, m):
        start = p  # skip every x^m + c0
    for n in range(start, p**m):
        coeffs = []
        for _ in range(m):
            n, r = divmod(n, p)
            coeffs.append(r)
        g = coeffs + [1]
        if _is_irreducible(g, p):
            return tuple(g)
    raise AssertionError("unreachable: irreducibles exist in every degree")


@dataclass(frozen=True)
class ExtField:
    """F_{p^m} realized as F_p[y] modulo a monic irreducible of degree m."""

    p: int
    m: int
    modulus: FpPoly = dc_field(compare=False, default=None)

    def __post_init__(self):
        if self.modulus is None:
            object.__setattr__(self, "modulus", FpPoly(self.p, _smallest_irreducible(self.p, self.m)))
        elif self.modulus.degree != self.m or not self.modulus.is_monic() or not is_irreducible(self.modulus):
            raise CsPolyError("field modulus must be monic irreducible of degree m")

    @classmethod
    @lru_cache(maxsize=None)
    def build(cls, p: int, m: int) -> "ExtField":
        if not is_prime(p):
            raise CsPolyError(f"{p} is not prime")
        return cls(p, m)

    @property
    def order(self) -> int:
        return self.p**self.m

    # element-level arithmetic on trimmed residue lists
    def mul(self, a, b):
        return _rem(_mul(a, b, self.p), self.modulus.coeffs, self.p)

    def add(self, a, b):
        return _add(list(a), list(b), self.p)

    def sub(self, a, b):
        return _sub(a, b, self.p)

    def pow(self, a, e):
        return _powmod(a, e, self.modulus.coeffs, self.p)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero in F_q")
        return self.pow(a, self.order - 2)

    def element(self, rep) -> "ExtFieldElem":
        return ExtFieldElem(self, tuple(_rem(_trim([c % self.p for c in rep]), self.modulus.coeffs, self.p)))

    def random(self, rng):
        return _trim([rng.randrange(self.p) for _ in range(self.m)])


@dataclass(frozen=True)
class ExtFieldElem:
    field: ExtField
    rep: tuple

    def __mul__(self, other):
        return ExtFieldElem(self.field, tuple(self.field.mul(self.rep, other.rep)))

    def __pow__(self, e):
        return ExtFieldElem(self.field, tuple(self.field.pow(list(self.rep), e)))

    def is_one(self) -> bool:
        return self.rep == (1,)

    def __str__(self):
        from .intpoly import format_poly
        return format_poly(self.rep, var="y").replace(" ", "") if self.rep else "0"


# polynomials over F_q: lists of element reps, ascending, no trailing zero reps

def _e_trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _e_mul(a, b, F):
    if not a or not b:
        return []
    out = [[] for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _e_trim(out)


def _e_rem(a, b, F):
    a = list(a)
    db = len(b) - 1
    inv = F.inv(b[-1])
    while len(a) - 1 >= db and a:
        c = F.mul(a[-1], inv)
        shift = len(a) - 1 - db
        for j in range(db + 1):
            a[shift + j] = F.sub(a[shift + j], F.mul(c, b[j]))
        _e_trim(a)
    return a


def _e_divmod(a, b, F):
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    inv = F.inv(b[-1])
    q = [[] for _ in range(len(a) - db)]
    for i in range(len(a) - 1, db - 1, -1):
        c = F.mul(a[i], inv)
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = F.sub(a[i - db + j], F.mul(c, b[j]))
    return _e_trim(q), _e_trim(a[:db])


def _e_monic(a, F):
    inv = F.inv(a[-1])
    return [F.mul(c, inv) for c in a]


def _e_gcd(a, b, F):
    while b:
        a, b = b, _e_rem(a, b, F)
    return _e_monic(a, F) if a else a


def _e_powmod(a, e, m, F):
    result = [[1]]
    base = _e_rem(a, m, F)
    while e:
        if e & 1:
            result = _e_rem(_e_mul(result, base, F), m, F)
        e >>= 1
        if e:
            base = _e_rem(_e_mul(base, base, F), m, F)
    return result


def _e_one_root(g, F, rng):
    """One root in F_q of a monic polynomial over F_q that splits into distinct linear factors."""
    while len(g) > 2:
        delta = F.random(rng)
        if F.p == 2:
            t = _e_rem([[], delta], g, F)
            acc = list(t)
            for _ in range(F.m - 1):
                t = _e_rem(_e_mul(t, t, F), g, F)
                acc = _e_trim([F.add(x, y) for x, y in _zip_longest(acc, t)])
            b = acc
        else:
            b = _e_powmod([delta, [1]], (F.order - 1) // 2, g, F)
            b = _e_trim([F.sub(b[0], [1]) if b else [F.p - 1]] + b[1:])
        h = _e_gcd(g, b, F)
        if 1 < len(h) < len(g):
            other = _e_divmod(g, h, F)[0]
            g = h if len(h) <= len(other) else _e_monic(other, F)
    # g = x + c, root -c
    return F.sub([], g[0])


def _zip_longest(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else [], b[i] if i < len(b) else []) for i in range(n)]


def _irreducible_roots(g, F, rng):
    """All d roots of an F_p-irreducible g of degree d | m, as Frobenius conjugates."""
    d = len(g) - 1
    if d == 1:
        return [_trim([(-g[0]) % F.p])]
    beta = _e_one_root([[c] if c else [] for c in g], F, rng)
    roots = [beta]
    for _ in range(d - 1):
        roots.append(F.pow(roots[-1], F.p))
    return roots


def _roots_with_multiplicity(factors, F, seed):
    rng = random.Random(seed)
    roots = []
    for g, e in factors:
        rs = _irreducible_roots(g, F, rng)
        for r in rs:
            roots.extend([r] * e)
    return roots


def roots_in_extension(f: FpPoly, field: ExtField, seed: int = DEFAULT_SEED) -> list:
    """Roots of f in the given extension, listed with multiplicity.

    Roots are grouped by irreducible factor (in ``factor`` order) and, within
    a factor, listed as successive Frobenius images of one root.
    """
    if f.p != field.p:
        raise CsPolyError("field characteristic does not match the polynomial")
    factors = _factor_list(_monic(list(f.coeffs), f.p), f.p, seed)
    need = 1
    for g, _ in factors:
        need = lcm(need, len(g) - 1)
    if field.m % need:
        raise CsPolyError(f"F_{f.p}^{field.m} is too small: roots need degree {need}")
    roots = _roots_with_multiplicity(factors, field, seed)
    for r in roots:
        assert _e_eval(f.coeffs, r, field) == [], "computed root does not annihilate f"
    return [ExtFieldElem(field, tuple(r)) for r in roots]


def _e_eval(coeffs, x, F):
    acc = []
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), [c] if c else [])
    return acc


# ---------------------------------------------------------------- regularity

def find_unit_product(roots, k, F):
    """First index k-tuple (lexicographic) whose root product is 1, else None."""
    n = len(roots)
    one = [1]

    def walk(start, depth, prod, chosen):
        for i in range(start, n - (k - depth) + 1):
            nxt = F.mul(prod, roots[i])
            if depth + 1 == k:
                if nxt == one:
                    return chosen + (i,)
            else:
                hit = walk(i + 1, depth + 1, nxt, chosen + (i,))
                if hit is not None:
                    return hit
        return None

    return walk(0, 0, one, ())


def _check_monic_k(f, k, doubly=True):
    if not f.is_monic():
        raise NotMonicError(f"regularity is defined for monic polynomials, got {f}")
    if doubly and not f.is_doubly_monic():
        raise NotDoublyMonicError(f"{f} is not doubly monic over F_{f.p}")
    n = f.degree
    if not 1 <= k <= n // 2:
        raise CsPolyError(f"k must lie in 1..{n // 2}, got {k}")


def _split_roots(f, seed=DEFAULT_SEED):
    p = f.p
    factors = _factor_list(list(f.coeffs), p, seed)
    m = 1
    for g, _ in factors:
        m = lcm(m, len(g) - 1)
    F = ExtField.build(p, m)
    return _roots_with_multiplicity(factors, F, seed), F


def regularity_witness(f: FpPoly, k: int, seed: int = DEFAULT_SEED, doubly_monic: bool = True):
    """Index tuple of k roots (with multiplicity) multiplying to 1, or None."""
    _check_monic_k(f, k, doubly_monic)
    roots, F = _split_roots(f, seed)
    return find_unit_product(roots, k, F)


def is_k_regular_mod_p(f: FpPoly, k: int, doubly_monic: bool = True) -> bool:
    """No product of k roots over strictly increasing indices equals 1.

    ``doubly_monic=False`` lifts the constant-term requirement, which the
    root-product definition itself does not need.
    """
    return regularity_witness(f, k, doubly_monic=doubly_monic) is None


def is_regular_mod_p(f: FpPoly, doubly_monic: bool = True) -> bool:
    if not f.is_monic():
        raise NotMonicError(f"regularity is defined for monic polynomials, got {f}")
    if doubly_monic and not f.is_doubly_monic():
        raise NotDoublyMonicError(f"{f} is not doubly monic over F_{f.p}")
    n = f.degree
    if n < 2:
        return True
    roots, F = _split_roots(f)
    return all(find_unit_product(roots, k, F) is None for k in range(1, n // 2 + 1))


def exterior_det_mod_p(f: FpPoly, k: int, doubly_monic: bool = True) -> int:
    """det(I - wedge^k A_p) in F_p for the companion matrix A_p of f."""
    _check_monic_k(f, k, doubly_monic)
    e = exterior_power_matrix(companion(f.lift()), k)
    return det(IntMatrix.identity(e.order) - e) % f.p


def is_k_regular_by_det(f: FpPoly, k: int, doubly_monic: bool = True) -> bool:
    return exterior_det_mod_p(f, k, doubly_monic) != 0
