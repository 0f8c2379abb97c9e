"""
Average mixing: oriented graphs can be flat on average
======================================================

The long-run average of the mixing matrix is sum_r E_r o conj(E_r).  Its
trace is at least (1/n) sum_r m_r^2, so any repeated eigenvalue rules out
a flat average.  Unsigned graphs beyond K2 never manage it; oriented odd
cycles and transitive tournaments always do.
"""
import numpy as np

from chiralwalk import graphs
from chiralwalk.catalog import SMALL_CONNECTED
from chiralwalk.linalg import eigh
from chiralwalk.mixing import average_mixing, average_mixing_cesaro, trace_lower_bound

rows = [("K2", graphs.complete(2))]
rows += [(name, graphs.from_edges(n, e)) for name, (n, e) in SMALL_CONNECTED.items()]
rows += [(f"oriented C{n}", graphs.oriented_cycle(n)) for n in (3, 5, 7, 9)]
rows += [(f"tournament T{n}", graphs.transitive_tournament(n)) for n in (2, 4, 6, 8)]
table, trans = graphs.symmetric_group_s3()
rows.append(("S3 Cayley", graphs.cayley_graph(table, trans)))

print(f"{'graph':15s} {'n':>3s} {'trace':>8s} {'bound':>8s} {'max|M-J/n|':>12s}")
for name, A in rows:
    sd = eigh(A)
    M = average_mixing(A, sd)
    dev = np.abs(M.entries - 1 / M.n).max()
    print(f"{name:15s} {M.n:3d} {M.trace:8.4f} {trace_lower_bound(sd):8.4f} {dev:12.2e}")

# The projector formula agrees with a brute-force time average.
A = graphs.path(3)
exact = average_mixing(A).entries
for horizon in (50, 200, 500):
    approx = average_mixing_cesaro(A, horizon=horizon, steps=100 * horizon).entries
    print(f"P3 time average to T={horizon:3d}: max error {np.abs(approx - exact).max():.2e}")
