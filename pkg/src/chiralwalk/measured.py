"""Measured walks on cones: partial measurement at the conical vertex and the
Las Vegas stopping rule that turns local uniform mixing into global mixing.

A trial starts at a non-conical vertex, alternates free evolution for
``measure_interval`` with a hit/miss measurement at vertex 0, and once a
measurement hits, evolves for ``settle_time`` from the cone. Random streams
are per trial, derived from ``(seed, trial_index)``, so batched and
single-trial runs give identical records.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConeInvalid, DimensionMismatch, IndexOutOfRange
from .graphs import ConeInput
from .linalg import hermitize, max_norm
from .mixing import QuantumWalk

NORM_TOL = 1e-10
SURE_HIT = 1.0 - 1e-14
STRATEGIES = ("restart", "continue")


def basis_state(n: int, a: int) -> np.ndarray:
    if not 0 <= a < n:
        raise IndexOutOfRange(f"vertex {a} out of range for order {n}")
    psi = np.zeros(n, dtype=np.complex128)
    psi[a] = 1.0
    return psi


def _as_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.ndim != 1:
        raise DimensionMismatch("state must be a vector")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"state norm {norm} is not 1")
    return psi


def evolve_state(A, psi, t: float) -> np.ndarray:
    """``U(t) psi``, renormalized against rounding drift."""
    psi = _as_state(psi)
    if np.asarray(A).shape[0] != psi.shape[0]:
        raise DimensionMismatch(f"matrix order {np.asarray(A).shape[0]} vs state length {psi.shape[0]}")
    out = QuantumWalk(A).unitary(t) @ psi
    return out / np.linalg.norm(out)


def partial_measure(psi, a: int, rng: np.random.Generator):
    """Projective hit/miss measurement at vertex ``a``.

    Returns ``(outcome, post_state, p_hit)`` with outcome 1 (hit) drawn with
    probability ``|psi_a|^2``. Consumes exactly one uniform from ``rng``.
    """
    psi = _as_state(psi)
    if not 0 <= a < psi.shape[0]:
        raise IndexOutOfRange(f"vertex {a} out of range for order {psi.shape[0]}")
    p_hit = float(abs(psi[a]) ** 2)
    u = rng.random()
    if u < p_hit or p_hit > SURE_HIT:
        return 1, basis_state(psi.shape[0], a), p_hit
    post = psi.copy()
    post[a] = 0.0
    return 0, post / math.sqrt(1.0 - p_hit), p_hit


def split_cone(cone_A) -> tuple[np.ndarray, float]:
    """Return ``(base, scale)`` for a cone matrix ``scale * [[0, 1^T], [1, base]]``.

    Raises :class:`ConeInvalid` if the matrix is not a cone over a valid base.
    """
    C = hermitize(cone_A)
    if C.shape[0] < 2:
        raise ConeInvalid("a cone needs at least two vertices")
    row = C[0, 1:]
    scale = float(row[0].real)
    if scale <= 0 or C[0, 0] != 0 or max_norm(row - scale) > 1e-12:
        raise ConeInvalid("row 0 must be [0, s, ..., s] with s > 0")
    base = C[1:, 1:] / scale
    try:
        ConeInput(base).validate()
    except ValueError as exc:
        raise ConeInvalid(f"base of cone fails the conical hypotheses: {exc}") from None
    return base, scale


def cone_amplitude_closed_form(n: int, t: float) -> complex:
    """``-(i / sqrt(n)) sin(sqrt(n) t)``."""
    return -1j / math.sqrt(n) * math.sin(math.sqrt(n) * t)


def cone_hit_amplitude(cone_A, start: int, t: float) -> complex:
    """``<e_0 | U(t) | e_start>`` for an unscaled cone."""
    _, scale = split_cone(cone_A)
    if scale != 1.0:
        raise ConeInvalid("cone_hit_amplitude expects an unscaled cone")
    n = np.asarray(cone_A).shape[0] - 1
    if not 1 <= start <= n:
        raise IndexOutOfRange(f"start {start} must be a non-conical vertex in 1..{n}")
    return complex(QuantumWalk(cone_A).unitary(t)[0, start])


def hit_interval(n: int) -> float:
    """``pi / (2 sqrt(n))``: the cone is hit with probability 1/n."""
    return math.pi / (2.0 * math.sqrt(n))


def settle_time(n: int) -> float:
    """``arccos(1/sqrt(n+1)) / sqrt(n)``: uniform mixing from the cone."""
    return math.acos(1.0 / math.sqrt(n + 1)) / math.sqrt(n)


@dataclass
class StoppingRuleConfig:
    """Parameters of the stopping rule on ``cone_matrix`` (vertex 0 is the cone).

    Unset times default to the hit interval and settle time of the base order,
    divided by the cone's scale (so a cone scaled by ``1/n`` gets times
    multiplied by ``n``). ``max_rounds`` defaults to ``100 n``.
    """

    cone_matrix: np.ndarray
    start: int = 1
    strategy: str = "restart"
    measure_interval: Optional[float] = None
    settle_time: Optional[float] = None
    max_rounds: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        self.cone_matrix = hermitize(self.cone_matrix)
        _, scale = split_cone(self.cone_matrix)
        n = self.n
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        if not 0 <= self.start <= n:
            raise IndexOutOfRange(f"start {self.start} out of range")
        if self.measure_interval is None:
            self.measure_interval = hit_interval(n) / scale
        if self.settle_time is None:
            self.settle_time = settle_time(n) / scale
        if self.max_rounds is None:
            self.max_rounds = 100 * n
        if self.measure_interval <= 0 or self.settle_time <= 0:
            raise ValueError("measure_interval and settle_time must be positive")
        if self.max_rounds < 0:
            raise ValueError("max_rounds must be nonnegative")

    @property
    def n(self) -> int:
        """Order of the base graph."""
        return self.cone_matrix.shape[0] - 1


@dataclass(frozen=True)
class TrialRecord:
    """``total_time`` is ``rounds * measure_interval``, plus ``settle_time`` on a hit.

    ``final_deviation`` is ``max_b |P(b) - 1/(n+1)|`` of the final distribution.
    """

    rounds: int
    total_time: float
    hit: bool
    final_deviation: float
    trace: tuple = ()


@dataclass(frozen=True)
class RunStats:
    trials: int
    mean_rounds: float
    mean_total_time: float
    hit_rate: float
    mean_final_deviation: float
    per_round_hit_prob: list
    max_final_deviation: float = 0.0
    post_failure_hit_rate: float = 0.0
    post_failure_measurements: int = 0
    per_round_mean_p_hit: list = field(default_factory=list)
    records: list = field(default_factory=list, repr=False)

    @property
    def post_first_failure_hit_prob(self) -> float:
        """Hit frequency of the second measurement among trials whose first one missed."""
        return self.per_round_hit_prob[1] if len(self.per_round_hit_prob) > 1 else 0.0

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "mean_rounds": self.mean_rounds,
            "mean_total_time": self.mean_total_time,
            "hit_rate": self.hit_rate,
            "mean_final_deviation": self.mean_final_deviation,
            "max_final_deviation": self.max_final_deviation,
            "post_failure_hit_rate": self.post_failure_hit_rate,
            "post_failure_measurements": self.post_failure_measurements,
            "post_first_failure_hit_prob": self.post_first_failure_hit_prob,
            "per_round_hit_prob": list(self.per_round_hit_prob),
            "per_round_mean_p_hit": list(self.per_round_mean_p_hit),
        }


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent PCG64 stream for trial ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), int(index)]))


class _Propagators:
    def __init__(self, cfg: StoppingRuleConfig):
        qw = QuantumWalk(cfg.cone_matrix)
        self.step = qw.unitary(cfg.measure_interval)
        settled = qw.unitary(cfg.settle_time)[:, 0]
        probs = np.abs(settled) ** 2
        self.final_deviation = float(np.abs(probs - 1.0 / len(probs)).max())


def _settle(cfg, prop, rounds, trace):
    return TrialRecord(rounds, rounds * cfg.measure_interval + cfg.settle_time, True,
                       prop.final_deviation, tuple(trace))


def run_trial(cfg: StoppingRuleConfig, rng: np.random.Generator, from_cone: bool = False,
              _prop: Optional[_Propagators] = None) -> TrialRecord:
    """One run of the stopping rule; ``trace`` holds ``(round, outcome, p_hit)``."""
    prop = _prop or _Propagators(cfg)
    if from_cone:
        return _settle(cfg, prop, 0, [])
    N = cfg.n + 1
    start = basis_state(N, cfg.start)
    psi = start
    trace = []
    for r in range(1, cfg.max_rounds + 1):
        psi = prop.step @ psi
        psi /= np.linalg.norm(psi)
        outcome, post, p_hit = partial_measure(psi, 0, rng)
        trace.append((r, outcome, p_hit))
        if outcome:
            return _settle(cfg, prop, r, trace)
        psi = start if cfg.strategy == "restart" else post
    return TrialRecord(cfg.max_rounds, cfg.max_rounds * cfg.measure_interval, False,
                       float("nan"), tuple(trace))


def monte_carlo(cfg: StoppingRuleConfig, trials: int, from_cone: bool = False,
                keep_records: bool = False, keep_trace: bool = False) -> RunStats:
    """Run ``trials`` independent trials, vectorized across trials.

    Trial ``i`` uses :func:`trial_rng` ``(cfg.seed, i)`` and yields exactly the
    record :func:`run_trial` would produce with that stream.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    prop = _Propagators(cfg)
    R = cfg.max_rounds
    N = cfg.n + 1
    if from_cone or R == 0:
        recs = [run_trial(cfg, trial_rng(cfg.seed, i), from_cone, prop) for i in range(trials)]
        return _aggregate(cfg, recs, [], [], [], keep_records)

    uniforms = np.stack([trial_rng(cfg.seed, i).random(R) for i in range(trials)])
    psi = np.zeros((trials, N), dtype=np.complex128)
    psi[:, cfg.start] = 1.0
    active = np.arange(trials)
    rounds = np.full(trials, R)
    hit = np.zeros(trials, dtype=bool)
    reached, hits, mean_p = [], [], []
    traces = [[] for _ in range(trials)] if keep_trace else None
    step_T = prop.step.T
    for r in range(R):
        if active.size == 0:
            break
        cur = psi[active] @ step_T
        cur /= np.linalg.norm(cur, axis=1, keepdims=True)
        p = np.abs(cur[:, 0]) ** 2
        now = (uniforms[active, r] < p) | (p > SURE_HIT)
        reached.append(int(active.size))
        hits.append(int(now.sum()))
        mean_p.append(float(p.mean()))
        if keep_trace:
            for idx, o, ph in zip(active, now, p):
                traces[idx].append((r + 1, int(o), float(ph)))
        done = active[now]
        rounds[done] = r + 1
        hit[done] = True
        miss = ~now
        if cfg.strategy == "restart":
            nxt = np.zeros((int(miss.sum()), N), dtype=np.complex128)
            nxt[:, cfg.start] = 1.0
        else:
            nxt = cur[miss].copy()
            nxt[:, 0] = 0.0
            nxt /= np.sqrt(1.0 - p[miss])[:, None]
        active = active[miss]
        psi[active] = nxt
    recs = []
    for i in range(trials):
        trace = tuple(traces[i]) if keep_trace else ()
        if hit[i]:
            recs.append(TrialRecord(int(rounds[i]), rounds[i] * cfg.measure_interval + cfg.settle_time,
                                    True, prop.final_deviation, trace))
        else:
            recs.append(TrialRecord(R, R * cfg.measure_interval, False, float("nan"), trace))
    return _aggregate(cfg, recs, reached, hits, mean_p, keep_records or keep_trace)


def _aggregate(cfg, recs, reached, hits, mean_p, keep_records) -> RunStats:
    trials = len(recs)
    hit_devs = [rec.final_deviation for rec in recs if rec.hit]
    post_measure = sum(reached[1:])
    post_hits = sum(hits[1:])
    return RunStats(
        trials=trials,
        mean_rounds=float(np.mean([rec.rounds for rec in recs])),
        mean_total_time=float(np.mean([rec.total_time for rec in recs])),
        hit_rate=len(hit_devs) / trials,
        mean_final_deviation=float(np.mean(hit_devs)) if hit_devs else float("nan"),
        per_round_hit_prob=[h / m for h, m in zip(hits, reached)],
        max_final_deviation=float(np.max(hit_devs)) if hit_devs else float("nan"),
        post_failure_hit_rate=post_hits / post_measure if post_measure else 0.0,
        post_failure_measurements=int(post_measure),
        per_round_mean_p_hit=mean_p,
        records=recs if keep_records else [],
    )
