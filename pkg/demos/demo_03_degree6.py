"""
Degree 6 by divisor search
==========================

Fixing q = c5 - c1 turns the three CS conditions in degree 6 into a small
Diophantine system.  For q >= 2 only finitely many solutions exist; q = 0 and
q = 1 give one-parameter rows.
"""

from cspoly.dioph6 import emit_table, solve_q, table_csv
from cspoly.cs_core import verify

for row in solve_q(4):
    f = row.poly()
    print(row.entries(), row.signs, verify(f).is_cs)

# counts per q
print({q: len(solve_q(q)) for q in range(2, 25)})

# the parametric rows at q = 0
print(table_csv(emit_table(0, 0)))
