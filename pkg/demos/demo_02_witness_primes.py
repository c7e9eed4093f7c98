"""
Witness primes
==============

If f mod p has k roots whose product is 1, then p divides
det(I - wedge^k A) and f cannot be CS.  The factorization mod p shows
where such products come from.
"""

from cspoly import IntPoly, factor, reduce_mod_p, verify
from cspoly.finite_field import format_factorization, regularity_witness

f = IntPoly.from_desc([1, 0, 0, 0, -1, -1])  # x^5 - x - 1
fp = reduce_mod_p(f, 2)
print(format_factorization(factor(fp)))
# the quadratic factor x^2 + x + 1 has constant term 1: its two roots multiply to 1
print("witness roots for k = 2:", regularity_witness(fp, 2))
print([(c.k, c.det_value) for c in verify(f).conditions])

# a degree-8 polynomial with two failing conditions; both determinants are
# (up to sign) a prime and the square of a prime
octic = IntPoly.from_desc([1, -2, -3, 3, -5, 6, -4, 4, 1])
rep = verify(octic)
for c in rep.conditions:
    print(c.k, c.det_value)
for w in rep.witnesses:
    print("k =", w.k, w.kind, w.value)
