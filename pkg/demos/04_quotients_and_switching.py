"""
Quotients and switching
=======================

The claw and the cone over the signed triangle share the equitable partition
{cone}, {leaves} and the same quotient, a single edge of weight sqrt 3.  So
both walks leave the cone vertex in exactly the same way.  The chiral K4 and
K1 + oriented triangle are related by a diagonal phase change, which leaves
every mixing matrix untouched.
"""
from itertools import permutations

import numpy as np

from chiralwalk import graphs
from chiralwalk.mixing import mixing_matrix
from chiralwalk.quotient import (
    quotient_matrix,
    quotient_walk_check,
    relabel,
    switching_certificate,
    verify_equitable,
)

cells = [[0], [1, 2, 3]]
for name, A in [("claw", graphs.claw(3)), ("signed cone", graphs.cone(graphs.odd_clique_signing(3)))]:
    p = verify_equitable(A, cells)
    B = quotient_matrix(p, A)
    res = max(quotient_walk_check(p, A, t) for t in np.linspace(0, 5, 11))
    print(f"{name:12s} quotient = {np.array2string(B.real, precision=4)}  walk residual {res:.1e}")

chiral = graphs.k4_chiral_signing()
other = graphs.k1_plus_oriented_triangle()
cert = switching_certificate(chiral, other)
d = cert.phases / cert.phases[1]
print("\nswitching phases (normalized at vertex 1):", np.round(d, 12))
gap = max(np.abs(mixing_matrix(chiral, t).entries - mixing_matrix(other, t).entries).max()
          for t in np.linspace(0, 4, 21))
print(f"largest mixing-matrix difference over 21 times: {gap:.1e}")

# Which relabelings that fix the cone are switching automorphisms?
print("\nleaf permutations of K1 + oriented triangle that are switchings of itself:")
for perm in permutations((1, 2, 3)):
    ok = switching_certificate(other, relabel(other, (0,) + perm)) is not None
    print(f"  {perm}: {'yes' if ok else 'no'}")
