"""
Box search with a mod-p filter
==============================

The searcher imposes f(1) = +-1 while enumerating, throws away most of the
rest with a cheap test modulo small primes, and sends the few survivors to
the exact check.  Runs can be checkpointed and resumed.
"""

import os
import tempfile

from cspoly.searcher import SearchSpec, box_search

spec = SearchSpec.cube(6, -2, 2)
rep = box_search(spec)
print("scanned", rep.scanned, "candidates", rep.candidates)
print("killed by the filter", rep.filtered, "passed", rep.filter_passed)
print("survivors:")
for f in rep.survivors:
    print("  ", f)

# degree 7 with two linear constraints on the coefficients
spec7 = SearchSpec.cube(7, -3, 3, constraints=("c1+c6=0", "c2+c5=0"))
print(len(box_search(spec7).survivors), "constrained degree-7 hits")

# checkpoint, then resume a finished run: nothing is recomputed
path = os.path.join(tempfile.mkdtemp(), "run.ckpt")
box_search(spec, checkpoint=path)
again = box_search(spec, checkpoint=path, resume=True)
print("resumed slices:", again.resumed_slices, "of", again.slices)
