"""
Small degrees: verify, enumerate, classify
==========================================

A doubly monic integer polynomial is CS when every determinant
det(I - wedge^k A), k <= n/2, of its companion matrix is +-1.
"""

from cspoly import IntPoly, verify
from cspoly.families import brute_force_enumerate, catalog, classify

# coefficients are given from the leading term down
f = IntPoly.from_desc([1, -3, 1])
report = verify(f)
print(f, "->", report.is_cs, [c.det_value for c in report.conditions])

# only two quadratics survive in a fairly wide window
print(brute_force_enumerate(2, (-10, 10)))

# degree 4: every hit in a box lands in one of four one-parameter rows
hits = brute_force_enumerate(4, (-3, 3))
for g in hits:
    c = classify(g)
    print(f"{str(g):28s} {c.family_id:8s} {c.as_dict()}")

# the rows themselves, with their positivity conditions
for fam in catalog(4):
    print(fam.id, fam.entry_strings(), fam.positivity)
