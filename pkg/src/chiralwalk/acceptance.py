"""Acceptance criteria as executable checks.

Each ``criterion_*`` function returns a :class:`CriterionResult` carrying the
measured value, the value it is compared against and the tolerance. The
``verify`` CLI command and ``tests/test_acceptance.py`` both run these.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from . import graphs
from .catalog import T_CHIRAL, T_CLAW, T_H3, T_HYPERCUBE, build_catalog
from .graphs import cone
from .linalg import eigh, max_norm
from .measured import (
    StoppingRuleConfig,
    cone_amplitude_closed_form,
    cone_hit_amplitude,
    hit_interval,
    monte_carlo,
    settle_time,
)
from .mixing import (
    QuantumWalk,
    average_mixing,
    average_mixing_cesaro,
    is_local_uniform,
    is_uniform,
    mixing_matrix,
    mixing_time_search,
    trace_lower_bound,
)
from .quotient import (
    partition_residuals,
    quotient_closed_form,
    quotient_walk_check,
    relabel,
    switching_certificate,
    verify_equitable,
)

SEED = 20240917


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    measured: float
    expected: float
    tolerance: float
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] criterion {self.number:2d}: {self.title} "
                f"(measured={self.measured:.6g}, expected={self.expected:.6g}, tol={self.tolerance:.3g})")

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": bool(self.passed),
            "measured": float(self.measured),
            "expected": float(self.expected),
            "tolerance": float(self.tolerance),
            "details": self.details,
        }


def _mixing_table_factors():
    return [
        ("K2", graphs.complete(2), T_HYPERCUBE),
        ("K3", graphs.complete(3), T_H3),
        ("K4", graphs.complete(4), T_HYPERCUBE),
        ("K13", graphs.claw(3), T_CLAW),
        ("chiral K4", graphs.k4_chiral_signing(), T_CHIRAL),
    ]


def criterion_1() -> CriterionResult:
    """Mixing-time table and Cartesian squares, eps 1e-9."""
    tol = 1e-9
    worst = 0.0
    details = {}
    for name, A, t in _mixing_table_factors():
        for label, M in ((name, A), (name + "^2", graphs.cartesian_product(A, A))):
            dev = is_uniform(mixing_matrix(M, t), tol).max_deviation
            details[label] = dev
            worst = max(worst, dev)
    return CriterionResult(1, "mixing-time table reproduced incl. Cartesian squares",
                           worst <= tol, worst, 0.0, tol, details)


def criterion_2() -> CriterionResult:
    """Search finds pi/(3 sqrt3) for the chiral K4; oriented H(2,4) uniform there."""
    res = mixing_time_search(graphs.k4_chiral_signing(), 1.0, 1e-9)
    t_err = abs(res.time - T_CHIRAL) if res.found else math.inf
    h24 = graphs.hamming(2, 4, "k4_chiral")
    dev = is_uniform(mixing_matrix(h24, res.time if res.found else T_CHIRAL), 1e-8).max_deviation
    passed = t_err <= 1e-9 and dev <= 1e-8 and h24.shape == (16, 16)
    return CriterionResult(2, "chiral K4 mixing time located; oriented H(2,4) uniform",
                           passed, t_err, 0.0, 1e-9,
                           {"found_time": res.time, "target": T_CHIRAL, "h24_deviation": dev})


def criterion_3() -> CriterionResult:
    """No uniform time for K5..K8 on [0, 20]."""
    found = {}
    mins = {}
    for n in range(5, 9):
        res = mixing_time_search(graphs.complete(n), 20.0, 1e-9)
        found[f"K{n}"] = res.time
        mins[f"K{n}"] = res.min_deviation
    passed = all(t is None for t in found.values())
    return CriterionResult(3, "K5..K8 have no uniform mixing up to t=20 (bounded search)",
                           passed, min(mins.values()), 1e-3, 1e-9,
                           {"found": found, "min_deviation": mins})


def _cone_bases():
    for n in range(3, 9):
        yield f"zeros({n})", graphs.empty(n)
        if n % 2:
            yield f"odd_signing({n})", graphs.odd_clique_signing(n)
        else:
            yield f"even_signing({n})", graphs.even_clique_signing(n)


def criterion_4() -> CriterionResult:
    """Cone start mixes locally at t0; cone amplitude closed form on 100 times."""
    tol = 1e-8
    rng = np.random.default_rng(SEED)
    times = rng.uniform(0.0, 10.0, size=100)
    worst_local = 0.0
    worst_amp = 0.0
    for name, base in _cone_bases():
        n = base.shape[0]
        C = cone(base)
        t0 = settle_time(n)
        worst_local = max(worst_local, is_local_uniform(mixing_matrix(C, t0), 0, tol).max_deviation)
        U = QuantumWalk(C).unitaries(times)
        closed = np.array([cone_amplitude_closed_form(n, t) for t in times])
        worst_amp = max(worst_amp, float(np.abs(U[:, 0, 1:] - closed[:, None]).max()))
        # spot-check the public single-entry path too
        worst_amp = max(worst_amp, abs(cone_hit_amplitude(C, n, times[0]) - closed[0]))
    worst = max(worst_local, worst_amp)
    return CriterionResult(4, "conical closed forms (settle time, hit amplitude)",
                           worst <= tol, worst, 0.0, tol,
                           {"local_uniform_deviation": worst_local, "amplitude_error": worst_amp})


def criterion_5(trials: int = 10000) -> CriterionResult:
    """Restart-strategy Monte Carlo against geometric(1/n) statistics."""
    details = {}
    passed = True
    worst_z = 0.0
    for n in (3, 5, 7):
        cfg = StoppingRuleConfig(cone(graphs.odd_clique_signing(n)), start=1,
                                 strategy="restart", seed=SEED + n)
        st = monte_carlo(cfg, trials)
        sigma_rounds = math.sqrt(n * (n - 1) / trials)
        t1, t0 = hit_interval(n), settle_time(n)
        z_rounds = abs(st.mean_rounds - n) / sigma_rounds
        z_time = abs(st.mean_total_time - (n * t1 + t0)) / (t1 * sigma_rounds)
        ok = z_rounds <= 3 and z_time <= 3 and st.hit_rate == 1.0 and st.max_final_deviation <= 1e-8
        passed &= ok
        worst_z = max(worst_z, z_rounds, z_time)
        details[f"n={n}"] = {
            "mean_rounds": st.mean_rounds, "z_rounds": z_rounds,
            "mean_total_time": st.mean_total_time, "expected_total_time": n * t1 + t0,
            "z_time": z_time, "hit_rate": st.hit_rate,
            "max_final_deviation": st.max_final_deviation,
        }
    return CriterionResult(5, "stopping rule: E[rounds]=n, E[T]=n t1 + t0, hits end uniform",
                           passed, worst_z, 0.0, 3.0, details)


def criterion_6() -> CriterionResult:
    """Clique signings: Hermitian, zero row sums, simple zero eigenvalue."""
    worst_rows = 0.0
    worst_herm = 0.0
    bad = []
    builders = [(graphs.odd_clique_signing, range(3, 16, 2)),
                (graphs.even_clique_signing, range(4, 17, 2))]
    for build, ns in builders:
        for n in ns:
            try:
                A = build(n)
            except ValueError as exc:
                bad.append(f"{build.__name__}({n}): {exc}")
                continue
            worst_herm = max(worst_herm, max_norm(A - A.conj().T))
            worst_rows = max(worst_rows, max_norm(A @ np.ones(n)))
            if eigh(A).multiplicity_of(0.0) != 1:
                bad.append(f"{build.__name__}({n}): zero not simple")
    passed = not bad and worst_herm == 0.0 and worst_rows <= 1e-9
    return CriterionResult(6, "clique signing constructions self-check for n=3..16",
                           passed, worst_rows, 0.0, 1e-9, {"hermitian_residual": worst_herm, "failures": bad})


def criterion_7(horizon: float = 500.0, steps: int = 50000) -> CriterionResult:
    """Projector formula against the Cesaro quadrature oracle for catalog graphs n <= 12."""
    tol = 5e-3
    details = {}
    seen = set()
    for entry in build_catalog():
        A = entry.matrix()
        if A.shape[0] > 12:
            continue
        key = A.tobytes()
        if key in seen:
            continue
        seen.add(key)
        gap = max_norm(average_mixing(A).entries - average_mixing_cesaro(A, horizon, steps).entries)
        details[entry.name] = gap
    worst = max(details.values())
    return CriterionResult(7, "average mixing matches Cesaro oracle (catalog, n<=12)",
                           worst <= tol, worst, 0.0, tol, details)


def criterion_8() -> CriterionResult:
    """Average uniform mixing and tight trace bound for oriented circulants."""
    graphs_list = [(f"oriented C{n}", graphs.oriented_cycle(n)) for n in (5, 7, 9)]
    graphs_list += [(f"T{n}", graphs.transitive_tournament(n)) for n in range(2, 9)]
    worst_dev = 0.0
    worst_trace = 0.0
    for _, A in graphs_list:
        sd = eigh(A)
        M = average_mixing(A, sd)
        worst_dev = max(worst_dev, is_uniform(M, 1e-9).max_deviation)
        worst_trace = max(worst_trace, abs(M.trace - 1.0), abs(trace_lower_bound(sd) - 1.0))
    sd3 = eigh(graphs.complete(3))
    bound3 = trace_lower_bound(sd3)
    trace3 = average_mixing(graphs.complete(3), sd3).trace
    k3_err = max(abs(bound3 - 5.0 / 3.0), abs(trace3 - 5.0 / 3.0))
    passed = worst_dev <= 1e-9 and worst_trace <= 1e-8 and k3_err <= 1e-8
    return CriterionResult(8, "oriented circulants have average uniform mixing; trace bound tight",
                           passed, worst_dev, 0.0, 1e-9,
                           {"trace_error": worst_trace, "K3_bound": bound3, "K3_trace": trace3})


def connected_graphs(n: int):
    """All labeled connected simple graphs on ``n`` vertices, as edge lists."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1, 1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        if len(graphs._components(n, edges)) == 1:
            yield edges


def criterion_9() -> CriterionResult:
    """No average uniform mixing for unsigned graphs on 3-4 vertices or the S3 Cayley graph."""
    min_dev = math.inf
    count = 0
    for n in (3, 4):
        for edges in connected_graphs(n):
            dev = is_uniform(average_mixing(graphs.from_edges(n, edges)), 1e-9).max_deviation
            min_dev = min(min_dev, dev)
            count += 1
    table, trans = graphs.symmetric_group_s3()
    s3_dev = is_uniform(average_mixing(graphs.cayley_graph(table, trans)), 1e-9).max_deviation
    k2 = is_uniform(average_mixing(graphs.complete(2)), 1e-9)
    passed = min_dev > 1e-3 and s3_dev > 1e-3 and k2.uniform
    return CriterionResult(9, "unsigned graphs lack average uniform mixing; K2 has it",
                           passed, min(min_dev, s3_dev), 1e-3, 1e-3,
                           {"graphs_checked": count, "S3_deviation": s3_dev, "K2_deviation": k2.max_deviation})


def criterion_10() -> CriterionResult:
    """Equitable partition identities and the quotient walk relation."""
    rng = np.random.default_rng(SEED + 10)
    cases = {"K13": graphs.claw(3), "K1+oriented K3": graphs.k1_plus_oriented_triangle()}
    cells = [[0], [1, 2, 3]]
    worst_id = 0.0
    worst_closed = 0.0
    worst_walk = 0.0
    for A in cases.values():
        p = verify_equitable(A, cells)
        res = partition_residuals(p, A)
        worst_id = max(worst_id, res["StS"], res["commutator"])
        worst_closed = max(worst_closed, max_norm(p.S.T @ A @ p.S - quotient_closed_form(p)))
        for t in rng.uniform(0.0, 10.0, size=20):
            worst_walk = max(worst_walk, quotient_walk_check(p, A, float(t)))
    passed = worst_id <= 1e-9 and worst_closed <= 1e-9 and worst_walk <= 1e-8
    return CriterionResult(10, "quotient identities, closed form and quotient walk",
                           passed, worst_walk, 0.0, 1e-8,
                           {"identity_residual": worst_id, "closed_form_gap": worst_closed})


def conical_relabel_certificates(A):
    """For each vertex ``w`` the first relabeling moving vertex 0 to ``w`` that is a switching of ``A``."""
    n = A.shape[0]
    found = {}
    for w in range(n):
        found[w] = None
        for perm in permutations(range(n)):
            if perm[0] != w:
                continue
            cert = switching_certificate(A, relabel(A, perm))
            if cert is not None:
                found[w] = list(perm)
                break
    return found


def criterion_11() -> CriterionResult:
    """Switching certificate for the chiral K4 pair and its conical switching automorphisms."""
    A1 = graphs.k4_chiral_signing()
    A2 = graphs.k1_plus_oriented_triangle()
    cert = switching_certificate(A1, A2)
    if cert is None:
        return CriterionResult(11, "switching certificate", False, math.inf, 0.0, 1e-9)
    d = cert.phases
    target = np.array([-1j, 1, 1, 1])
    phase = d[1] / abs(d[1])
    d_err = float(np.abs(d / phase - target).max())
    rng = np.random.default_rng(SEED + 11)
    qa, qb = QuantumWalk(A1), QuantumWalk(A2)
    mix_err = max(max_norm(qa.mixing(t).entries - qb.mixing(t).entries)
                  for t in rng.uniform(0.0, 10.0, size=20))
    relabels = conical_relabel_certificates(A2)
    all_found = all(v is not None for v in relabels.values())
    worst = max(d_err, mix_err, cert.residual)
    return CriterionResult(11, "switching certificate D=diag(-i,1,1,1); equal mixing; conical automorphisms",
                           worst <= 1e-9 and all_found, worst, 0.0, 1e-9,
                           {"D": [[z.real, z.imag] for z in d], "mixing_gap": mix_err,
                            "relabelings": relabels})


def criterion_12(trials: int = 10000) -> CriterionResult:
    """Continue strategy: no second-round hits at t1, some at 0.6 t1."""
    C = cone(graphs.empty(3))
    t1 = hit_interval(3)
    at_t1 = monte_carlo(StoppingRuleConfig(C, strategy="continue", seed=SEED + 12), trials)
    short = monte_carlo(StoppingRuleConfig(C, strategy="continue", seed=SEED + 13,
                                           measure_interval=0.6 * t1), trials)
    p1 = at_t1.post_first_failure_hit_prob
    p2 = short.post_first_failure_hit_prob
    passed = p1 <= 1e-6 and p2 > 1e-3
    return CriterionResult(12, "continue strategy: post-failure hits vanish at t1, survive at 0.6 t1",
                           passed, p1, 0.0, 1e-6,
                           {"post_first_failure_hit_prob_t1": p1,
                            "post_first_failure_hit_prob_0.6t1": p2,
                            "mean_p_hit_round2_t1": at_t1.per_round_mean_p_hit[1],
                            "hit_rate_t1": at_t1.hit_rate, "hit_rate_0.6t1": short.hit_rate})


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
    9: criterion_9, 10: criterion_10, 11: criterion_11, 12: criterion_12,
}


def run_all(only=None) -> list[CriterionResult]:
    numbers = sorted(CRITERIA) if only is None else sorted(only)
    return [CRITERIA[k]() for k in numbers]
