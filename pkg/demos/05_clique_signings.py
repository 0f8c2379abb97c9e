"""
Signed cliques with a simple zero eigenvalue
============================================

A cone over any base whose rows sum to zero and whose zero eigenvalue is
simple hits the cone vertex with amplitude -(i/sqrt n) sin(sqrt n t).  Odd
cliques get this from a +-i circulant; even cliques need a block layout with
(n-1)-th roots of unity.  This script checks both constructions and the
amplitude formula.
"""
import math

import numpy as np

from chiralwalk import graphs
from chiralwalk.linalg import eigh
from chiralwalk.measured import cone_amplitude_closed_form, cone_hit_amplitude

print(" n   max|row sum|   mult(0)   amplitude error")
rng = np.random.default_rng(0)
for n in range(3, 13):
    A = graphs.odd_clique_signing(n) if n % 2 else graphs.even_clique_signing(n)
    C = graphs.cone(A)
    err = max(abs(cone_hit_amplitude(C, 1, t) - cone_amplitude_closed_form(n, t))
              for t in rng.uniform(0, 10, 20))
    print(f"{n:2d}   {np.abs(A.sum(axis=1)).max():.1e}        {eigh(A).multiplicity_of(0.0)}"
          f"         {err:.1e}")

print("\nthe 8-vertex signing, entries shown as powers of w = exp(2 pi i / 7):")
A = graphs.even_clique_signing(8)
k = np.rint(np.angle(A) / (2 * math.pi / 7)).astype(int) % 7
print(np.where(np.abs(A) > 0.5, k, -1))
