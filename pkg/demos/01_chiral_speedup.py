"""
Chirality speeds up uniform mixing on four vertices
===================================================

The claw K_{1,3} mixes uniformly at 2*pi/(3*sqrt 3).  Putting a +-i signing on
the edges of K_4 so that the three leaves form a directed triangle halves that
time.  This script prints both mixing times, the deviation profile around
them, and the Cartesian powers that inherit the speedup.
"""
import math

import numpy as np

from chiralwalk import graphs
from chiralwalk.mixing import is_uniform, mixing_matrix, mixing_time_search

claw = graphs.claw(3)
chiral = graphs.k4_chiral_signing()

print("chiral K4 adjacency (row 0 is the cone):")
print(np.array2string(chiral, precision=0, suppress_small=True))

# Search both graphs on [0, 2] for the earliest time the mixing matrix is flat.
for name, A in [("claw K13", claw), ("chiral K4", chiral), ("plain K4", graphs.complete(4))]:
    res = mixing_time_search(A, 2.0)
    t = "none" if res.time is None else f"{res.time:.12f}"
    print(f"{name:10s}  first uniform time = {t}")

print(f"\nreference values: pi/(3 sqrt3) = {math.pi / (3 * math.sqrt(3)):.12f}, "
      f"2pi/(3 sqrt3) = {2 * math.pi / (3 * math.sqrt(3)):.12f}")

# How flat is the chiral walk near its mixing time?
t_star = math.pi / (3 * math.sqrt(3))
print("\n   t/t*   max|M_ab - 1/4|")
for frac in (0.8, 0.9, 0.99, 1.0, 1.01, 1.1):
    dev = is_uniform(mixing_matrix(chiral, frac * t_star)).max_deviation
    print(f"  {frac:5.2f}   {dev:.3e}")

# Mixing survives Cartesian products, so the oriented Hamming graphs mix
# at the same time.
for n in (1, 2):
    H = graphs.hamming(n, 4, signing="k4_chiral")
    rep = is_uniform(mixing_matrix(H, t_star))
    print(f"oriented H({n},4): order {H.shape[0]:3d}, uniform={rep.uniform}, "
          f"deviation {rep.max_deviation:.1e}")
