"""Catalog of published uniform-mixing and average-mixing results, each
rebuilt from a :class:`GraphSpec` and re-checked numerically."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from . import graphs
from .graphs import GraphSpec
from .linalg import eigh
from .mixing import (
    average_mixing,
    is_local_uniform,
    is_uniform,
    mixing_matrix,
    mixing_time_search,
    trace_lower_bound,
)

CLAIMS = ("uniform_at", "local_uniform_at", "avg_uniform", "no_avg_uniform",
          "no_uniform_up_to", "trace_equals")

PI = math.pi
SQRT3 = math.sqrt(3.0)
T_HYPERCUBE = PI / 4
T_H3 = 2 * PI / 9
T_CLAW = 2 * PI / (3 * SQRT3)
T_CHIRAL = PI / (3 * SQRT3)

UNIFORM_EPS = 1e-9
NONUNIFORM_GAP = 1e-3
TRACE_TOL = 1e-8


@dataclass(frozen=True)
class CatalogEntry:
    """One checkable claim.

    ``expected_value`` is the time for ``uniform_at``/``local_uniform_at``,
    the search horizon for ``no_uniform_up_to``, the trace for
    ``trace_equals``, the tolerance for ``avg_uniform`` and the minimum
    deviation for ``no_avg_uniform``.
    """

    name: str
    graph_spec: GraphSpec
    claim: str
    expected_value: float
    source: str
    vertex: Optional[int] = None

    def matrix(self) -> np.ndarray:
        return self.graph_spec.build()


@dataclass(frozen=True)
class CatalogResult:
    name: str
    claim: str
    passed: bool
    measured: float
    expected: float
    source: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "claim": self.claim,
            "passed": bool(self.passed),
            "measured": float(self.measured),
            "expected": float(self.expected),
            "source": self.source,
        }


def _product_edges(A, B) -> list:
    P = graphs.cartesian_product(A, B)
    n = P.shape[0]
    return [[a, b] for a in range(n) for b in range(a + 1, n) if P[a, b] != 0]


SMALL_CONNECTED = {
    "P3": (3, [(0, 1), (1, 2)]),
    "K3": (3, [(0, 1), (1, 2), (0, 2)]),
    "P4": (4, [(0, 1), (1, 2), (2, 3)]),
    "K13": (4, [(0, 1), (0, 2), (0, 3)]),
    "C4": (4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
    "paw": (4, [(0, 1), (1, 2), (2, 0), (2, 3)]),
    "diamond": (4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
    "K4": (4, [(a, b) for a, b in combinations(range(4), 2)]),
}


def build_catalog() -> list[CatalogEntry]:
    """All catalog entries, sorted by name."""
    table_src = "Hamming and claw-power mixing times"
    E = []
    for n in (1, 2):
        E.append(CatalogEntry(f"H({n},2) uniform at pi/4", GraphSpec("hamming", n=n, d=2),
                              "uniform_at", T_HYPERCUBE, table_src))
        E.append(CatalogEntry(f"H({n},3) uniform at 2pi/9", GraphSpec("hamming", n=n, d=3),
                              "uniform_at", T_H3, table_src))
        E.append(CatalogEntry(f"H({n},4) uniform at pi/4", GraphSpec("hamming", n=n, d=4),
                              "uniform_at", T_HYPERCUBE, table_src))
        E.append(CatalogEntry(f"oriented H({n},4) uniform at pi/(3 sqrt3)",
                              GraphSpec("hamming", n=n, d=4, signing="k4_chiral"),
                              "uniform_at", T_CHIRAL, "oriented Hamming graphs"))
    claw = graphs.claw(3)
    E.append(CatalogEntry("K13 uniform at 2pi/(3 sqrt3)", GraphSpec("claw", n=3),
                          "uniform_at", T_CLAW, table_src))
    E.append(CatalogEntry("K13^2 uniform at 2pi/(3 sqrt3)",
                          GraphSpec("explicit", n=16, edges=_product_edges(claw, claw)),
                          "uniform_at", T_CLAW, table_src))
    E.append(CatalogEntry("K13 local uniform from cone at pi/(3 sqrt3)", GraphSpec("claw", n=3),
                          "local_uniform_at", T_CHIRAL, "chiral K4 speedup", vertex=0))
    E.append(CatalogEntry("chiral K4 uniform at pi/(3 sqrt3)",
                          GraphSpec("complete", n=4, signing="k4_chiral"),
                          "uniform_at", T_CHIRAL, "chiral K4 speedup"))
    for n in range(5, 9):
        E.append(CatalogEntry(f"K{n} no uniform up to t=20", GraphSpec("complete", n=n),
                              "no_uniform_up_to", 20.0, "complete graphs beyond K4"))
    E.append(CatalogEntry("K2 average uniform", GraphSpec("complete", n=2),
                          "avg_uniform", UNIFORM_EPS, "unsigned average mixing"))
    for name, (n, edges) in SMALL_CONNECTED.items():
        E.append(CatalogEntry(f"{name} no average uniform",
                              GraphSpec("explicit", n=n, edges=[list(e) for e in edges]),
                              "no_avg_uniform", NONUNIFORM_GAP, "unsigned average mixing"))
    table, transpositions = graphs.symmetric_group_s3()
    E.append(CatalogEntry("S3 transpositions Cayley no average uniform",
                          GraphSpec("cayley", table=table.tolist(), connection=transpositions),
                          "no_avg_uniform", NONUNIFORM_GAP, "non-abelian Cayley graph"))
    for n in (3, 5, 7, 9):
        E.append(CatalogEntry(f"oriented C{n} average uniform",
                              GraphSpec("cycle", n=n, signing="oriented_cycle"),
                              "avg_uniform", UNIFORM_EPS, "oriented odd cycles"))
    for n in range(2, 9):
        E.append(CatalogEntry(f"transitive tournament T{n} average uniform",
                              GraphSpec("skew_circulant", n=n, signing="transitive_tournament"),
                              "avg_uniform", UNIFORM_EPS, "oriented skew circulants"))
    E.append(CatalogEntry("K3 average mixing trace 5/3", GraphSpec("complete", n=3),
                          "trace_equals", 5.0 / 3.0, "multiplicity trace bound"))
    E.append(CatalogEntry("K4 average mixing trace 5/2", GraphSpec("complete", n=4),
                          "trace_equals", 10.0 / 4.0, "multiplicity trace bound"))
    return sorted(E, key=lambda e: e.name)


def evaluate(entry: CatalogEntry) -> CatalogResult:
    A = entry.matrix()
    claim = entry.claim
    if claim == "uniform_at":
        rep = is_uniform(mixing_matrix(A, entry.expected_value), UNIFORM_EPS)
        passed, measured = rep.uniform, rep.max_deviation
    elif claim == "local_uniform_at":
        rep = is_local_uniform(mixing_matrix(A, entry.expected_value), entry.vertex or 0, UNIFORM_EPS)
        passed, measured = rep.uniform, rep.max_deviation
    elif claim == "no_uniform_up_to":
        res = mixing_time_search(A, entry.expected_value, UNIFORM_EPS)
        passed, measured = not res.found, res.min_deviation
    elif claim == "avg_uniform":
        rep = is_uniform(average_mixing(A), entry.expected_value)
        passed, measured = rep.uniform, rep.max_deviation
    elif claim == "no_avg_uniform":
        rep = is_uniform(average_mixing(A), UNIFORM_EPS)
        passed, measured = rep.max_deviation > entry.expected_value, rep.max_deviation
    elif claim == "trace_equals":
        sd = eigh(A)
        tr = average_mixing(A, sd).trace
        bound = trace_lower_bound(sd)
        passed = abs(tr - entry.expected_value) <= TRACE_TOL and abs(bound - entry.expected_value) <= TRACE_TOL
        measured = tr
    else:
        raise ValueError(f"unknown claim {claim!r}")
    return CatalogResult(entry.name, claim, bool(passed), float(measured),
                         float(entry.expected_value), entry.source)


def run_catalog(entries: Optional[list] = None) -> list[CatalogResult]:
    entries = build_catalog() if entries is None else entries
    return [evaluate(e) for e in entries]
