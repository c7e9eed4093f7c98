import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cspoly.errors import CsPolyError, NotDoublyMonicError, UndecidedError
from cspoly.finite_field import (
    ExtField,
    FpPoly,
    exterior_det_mod_p,
    factor,
    find_unit_product,
    first_primes,
    format_factorization,
    is_irreducible,
    is_k_regular_by_det,
    is_k_regular_mod_p,
    is_prime,
    is_primitive,
    is_regular_mod_p,
    reduce_mod_p,
    regularity_witness,
    roots_in_extension,
    splitting_degree,
    trial_factor,
)
from cspoly.intpoly import IntPoly

X = sympy.Symbol("x")
PRIMES = [2, 3, 5, 7, 11, 13]


def fp_polys(min_deg=1, max_deg=7, monic=True):
    return st.tuples(st.sampled_from(PRIMES), st.integers(min_deg, max_deg)).flatmap(
        lambda pn: st.lists(st.integers(0, pn[0] - 1), min_size=pn[1], max_size=pn[1]).map(
            lambda c: FpPoly(pn[0], tuple(c) + (1 if monic else pn[0] - 1,))
        )
    )


def all_monic(p, n, constant=None):
    for tail in itertools.product(range(p), repeat=n):
        if constant is not None and tail[0] != constant % p:
            continue
        yield FpPoly(p, tail + (1,))


def mult_order(f: FpPoly):
    """Brute-force multiplicative order of x modulo f."""
    one = FpPoly(f.p, (1,))
    x = FpPoly(f.p, (0, 1))
    acc = x % f
    k = 1
    while acc != one:
        acc = (acc * x) % f
        k += 1
    return k


# ------------------------------------------------------------ integers

def test_is_prime_agrees_with_sympy():
    for n in range(-3, 5000):
        assert is_prime(n) == sympy.isprime(n)
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randrange(10**12, 10**18)
        assert is_prime(n) == sympy.isprime(n)
    assert is_prime(5525329)
    assert is_prime(117913421)
    with pytest.raises(UndecidedError):
        is_prime(10**30 + 1)


def test_first_primes():
    assert first_primes(25)[-1] == 97
    assert first_primes(10) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_trial_factor():
    assert trial_factor(2**4 * 3 * 101, 10) == {2: 4, 3: 1, 101: 1}
    assert trial_factor(5525329**2, 10**4) == {5525329: 2}
    with pytest.raises(UndecidedError):
        trial_factor(1000003 * 1000033, 100)


# ------------------------------------------------------------ F_p[x]

def test_fppoly_basics():
    f = FpPoly.from_desc(2, [1, 0, 0, 0, 1, 1])
    assert str(f) == "x^5+x+1"
    assert f.is_doubly_monic()
    assert reduce_mod_p(IntPoly.from_desc([1, 0, 0, 0, -1, -1]), 2) == f
    with pytest.raises(CsPolyError):
        reduce_mod_p(IntPoly((1, 1)), 4)


@given(fp_polys(), fp_polys())
def test_division_identity(a, b):
    if a.p != b.p:
        b = FpPoly(a.p, b.coeffs)
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@settings(max_examples=80, deadline=None)
@given(fp_polys(1, 9))
def test_factor_matches_sympy(f):
    got = factor(f)
    prod = FpPoly(f.p, (1,))
    for g, e in got:
        assert g.is_monic() and is_irreducible(g)
        prod = prod * g**e
    assert prod == f
    _, want = sympy.Poly(list(reversed([int(c) for c in f.coeffs])), X, modulus=f.p).factor_list()
    want = sorted((tuple(int(c) % f.p for c in g.all_coeffs()), e) for g, e in want)
    have = sorted((tuple(reversed(g.coeffs)), e) for g, e in got)
    assert have == want


def test_factor_example_and_format():
    f = reduce_mod_p(IntPoly.from_desc([1, 0, 0, 0, -1, -1]), 2)
    assert format_factorization(factor(f)) == "(x^2+x+1)(x^3+x^2+1)"
    assert splitting_degree(f) == 6
    sq = reduce_mod_p(IntPoly.from_desc([1, 1, -1, 1, 0, 0, 0, 1, 1]), 3)
    assert format_factorization(factor(sq)) == "(x^4+2x^3+2x^2+x+2)^2"


def test_factor_is_seed_independent():
    f = FpPoly.from_desc(7, [1, 3, 0, 2, 5, 6, 1, 4, 1])
    assert factor(f, seed=1) == factor(f, seed=99)


@settings(max_examples=60, deadline=None)
@given(fp_polys(1, 8))
def test_irreducible_matches_sympy(f):
    sp = sympy.Poly(list(reversed([int(c) for c in f.coeffs])), X, modulus=f.p)
    assert is_irreducible(f) == sp.is_irreducible


def test_primitive_against_brute_force_order():
    for p, n in [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (5, 2)]:
        for f in all_monic(p, n):
            if f.coeffs[0] == 0 or not is_irreducible(f):
                continue
            assert is_primitive(f) == (mult_order(f) == p**n - 1), str(f)


def test_primitive_counts_over_f2():
    # number of primitive polynomials of degree n over F_2 is phi(2^n - 1) / n
    for n in range(1, 11):
        count = sum(1 for f in all_monic(2, n, constant=1) if is_irreducible(f) and is_primitive(f))
        assert count == sympy.totient(2**n - 1) // n


def test_primitive_rejects_reducible():
    with pytest.raises(CsPolyError):
        is_primitive(FpPoly.from_desc(2, [1, 0, 1]))


# ------------------------------------------------------------ extension fields

@pytest.mark.parametrize("p,m", [(2, 1), (2, 4), (2, 6), (3, 3), (5, 2), (7, 3), (13, 4)])
def test_extension_field_axioms(p, m):
    F = ExtField.build(p, m)
    assert F.modulus.degree == m and is_irreducible(F.modulus)
    rng = random.Random(p * 100 + m)
    for _ in range(30):
        a, b, c = F.random(rng), F.random(rng), F.random(rng)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        if a:
            assert F.mul(a, F.inv(a)) == [1]
            assert F.pow(a, F.order - 1) == [1]


def test_modulus_is_smallest_irreducible():
    F = ExtField.build(2, 4)
    assert str(F.modulus) == "x^4+x+1"
    # x^8 + c is never irreducible over F_5, so the search skips those
    F = ExtField.build(5, 8)
    assert is_irreducible(F.modulus)


def test_explicit_modulus_is_checked():
    with pytest.raises(CsPolyError):
        ExtField(2, 2, FpPoly.from_desc(2, [1, 0, 1]))


@settings(max_examples=50, deadline=None)
@given(fp_polys(1, 6))
def test_roots_in_extension(f):
    m = splitting_degree(f)
    F = ExtField.build(f.p, m)
    roots = roots_in_extension(f, F)
    assert len(roots) == f.degree
    # rebuild f from its roots: prod (x - r) must equal f
    acc = [[1]]
    for r in roots:
        neg = F.sub([], list(r.rep))
        nxt = [[] for _ in range(len(acc) + 1)]
        for i, c in enumerate(acc):
            nxt[i + 1] = F.add(nxt[i + 1], c)
            nxt[i] = F.add(nxt[i], F.mul(c, neg))
        acc = nxt
    assert [tuple(c) for c in acc] == [((c,) if c else ()) for c in f.coeffs]


def test_roots_need_large_enough_field():
    f = FpPoly.from_desc(2, [1, 1, 1])
    with pytest.raises(CsPolyError):
        roots_in_extension(f, ExtField.build(2, 3))


def test_roots_by_exhaustive_search_small_field():
    # every element of F_16 that is a root of f shows up, with the right multiplicity
    F = ExtField.build(2, 4)
    f = FpPoly.from_desc(2, [1, 0, 0, 1, 1]) * FpPoly.from_desc(2, [1, 1, 1])
    roots = sorted(tuple(r.rep) for r in roots_in_extension(f, F))
    brute = []
    for bits in itertools.product(range(2), repeat=4):
        x = list(bits)
        while x and x[-1] == 0:
            x.pop()
        acc = []
        for c in reversed(f.coeffs):
            acc = F.add(F.mul(acc, x), [c] if c else [])
        if not acc:
            brute.append(tuple(x))
    assert roots == sorted(brute)


# ------------------------------------------------------------ regularity

def test_unit_product_search():
    F = ExtField.build(5, 1)
    assert find_unit_product([[2], [3], [4]], 2, F) == (0, 1)
    assert find_unit_product([[2], [2]], 2, F) is None
    assert find_unit_product([[2], [4], [1]], 1, F) == (2,)


def test_quintic_is_not_2_regular_mod_2():
    f = reduce_mod_p(IntPoly.from_desc([1, 0, 0, 0, -1, -1]), 2)
    assert is_k_regular_mod_p(f, 1)
    assert not is_k_regular_mod_p(f, 2)
    assert regularity_witness(f, 2) is not None
    assert not is_regular_mod_p(f)


def test_reducible_but_regular_over_f3():
    f = reduce_mod_p(IntPoly.from_desc([1, 1, -1, 1, 0, 0, 0, 1, 1]), 3)
    assert not is_irreducible(f)
    assert is_regular_mod_p(f)


@settings(max_examples=60, deadline=None)
@given(fp_polys(2, 7))
def test_root_products_agree_with_determinant(f):
    c0 = (-1) ** f.degree % f.p
    f = FpPoly(f.p, (c0,) + f.coeffs[1:])
    for k in range(1, f.degree // 2 + 1):
        assert is_k_regular_mod_p(f, k) == is_k_regular_by_det(f, k)


def test_reciprocal_preserves_regularity():
    rng = random.Random(3)
    for _ in range(60):
        p = rng.choice([2, 3, 5, 7])
        n = rng.randint(2, 7)
        tail = [rng.randrange(p) for _ in range(n - 1)]
        f = FpPoly(p, ((-1) ** n % p, *tail, 1))
        star = FpPoly(p, tuple((-1) ** n * f[n - i] for i in range(n + 1)))
        for k in range(1, n // 2 + 1):
            assert is_k_regular_mod_p(f, k) == is_k_regular_mod_p(star, k)


def test_irreducible_primitive_implies_regular_any_p():
    for p, n in [(3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2), (7, 3)]:
        for f in all_monic(p, n):
            if f.coeffs[0] and is_irreducible(f) and is_primitive(f):
                assert is_regular_mod_p(f, doubly_monic=False), str(f)


def test_regularity_input_checks():
    with pytest.raises(NotDoublyMonicError):
        is_k_regular_mod_p(FpPoly.from_desc(3, [1, 0, 0, 1]), 1)
    with pytest.raises(CsPolyError):
        is_k_regular_mod_p(FpPoly.from_desc(2, [1, 0, 0, 1]), 2)
    assert exterior_det_mod_p(FpPoly.from_desc(2, [1, 1, 1]), 1) == 1
