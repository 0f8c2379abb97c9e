"""Walk evolution, mixing matrices, uniformity tests and mixing-time search."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import expm

from . import graphs
from .errors import IndexOutOfRange, PreconditionUnmet
from .linalg import SpectralDecomposition, eigh, hermitize, spectral_apply

DEFAULT_EPS = 1e-9
DEFAULT_GRID = 20000
CESARO_HORIZON = 500.0
CESARO_STEPS = 50000
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MixingMatrix:
    """``M(t) = U(t) o conj(U(t))``; column ``a`` is the distribution from start ``a``."""

    entries: np.ndarray
    time: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def stochasticity_residual(self) -> float:
        rows = np.abs(self.entries.sum(axis=1) - 1).max()
        cols = np.abs(self.entries.sum(axis=0) - 1).max()
        return float(max(rows, cols))


@dataclass(frozen=True)
class AverageMixingMatrix:
    """Cesaro average of ``M(t)`` over all time."""

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))


@dataclass(frozen=True)
class UniformityReport:
    uniform: bool
    max_deviation: float
    worst_entry: tuple
    epsilon: float

    def to_dict(self) -> dict:
        return {
            "uniform": bool(self.uniform),
            "max_deviation": float(self.max_deviation),
            "worst_entry": [int(i) for i in self.worst_entry],
            "epsilon": float(self.epsilon),
        }


class QuantumWalk:
    """Continuous-time walk ``U(t) = exp(-i t A)`` with a cached decomposition.

    Methods taking ``times`` are vectorized over a 1-D array of times.
    """

    def __init__(self, A, sd: Optional[SpectralDecomposition] = None):
        self.A = hermitize(A)
        self.sd = sd if sd is not None else eigh(self.A)
        self.n = self.A.shape[0]

    def unitary(self, t: float) -> np.ndarray:
        return spectral_apply(self.sd, lambda lam: np.exp(-1j * lam * t))

    def unitaries(self, times) -> np.ndarray:
        times = np.atleast_1d(np.asarray(times, dtype=float))
        phases = np.exp(-1j * np.outer(times, self.sd.eigenvalues))
        return np.einsum("tr,rab->tab", phases, self.sd.projectors)

    def mixing(self, t: float) -> MixingMatrix:
        U = self.unitary(t)
        return MixingMatrix(np.abs(U) ** 2, float(t))

    def deviations(self, times, chunk: int = 2048) -> np.ndarray:
        """``max_ab |M_ab(t) - 1/n|`` for each time."""
        times = np.atleast_1d(np.asarray(times, dtype=float))
        out = np.empty(len(times))
        for start in range(0, len(times), chunk):
            U = self.unitaries(times[start:start + chunk])
            out[start:start + chunk] = np.abs(np.abs(U) ** 2 - 1.0 / self.n).max(axis=(1, 2))
        return out

    def lipschitz(self) -> float:
        """Bound on ``|d/dt M_ab(t)|``: twice the spectral radius."""
        return 2.0 * float(np.max(np.abs(self.sd.eigenvalues)))


def evolution(A, t: float) -> np.ndarray:
    """``U(t) = sum_r exp(-i lambda_r t) E_r``."""
    return QuantumWalk(A).unitary(t)


def mixing_matrix(A, t: float) -> MixingMatrix:
    return QuantumWalk(A).mixing(t)


def _entries(M) -> np.ndarray:
    return np.asarray(M.entries if hasattr(M, "entries") else M, dtype=float)


def is_uniform(M, eps: float = DEFAULT_EPS) -> UniformityReport:
    """Compare every entry of ``M`` with ``1/n``."""
    E = _entries(M)
    dev = np.abs(E - 1.0 / E.shape[0])
    worst = np.unravel_index(int(np.argmax(dev)), dev.shape)
    max_dev = float(dev[worst])
    return UniformityReport(max_dev <= eps, max_dev, tuple(int(i) for i in worst), eps)


def is_local_uniform(M, a: int, eps: float = DEFAULT_EPS) -> UniformityReport:
    """Compare column ``a`` of ``M`` (the distribution from start ``a``) with ``1/n``."""
    E = _entries(M)
    n = E.shape[0]
    if not 0 <= a < n:
        raise IndexOutOfRange(f"vertex {a} out of range for order {n}")
    dev = np.abs(E[:, a] - 1.0 / n)
    b = int(np.argmax(dev))
    return UniformityReport(float(dev[b]) <= eps, float(dev[b]), (b, a), eps)


def average_mixing(A, sd: Optional[SpectralDecomposition] = None) -> AverageMixingMatrix:
    """``sum_r E_r o conj(E_r)`` over the spectral projectors of ``A``."""
    if sd is None:
        sd = eigh(A)
    E = sd.projectors
    return AverageMixingMatrix(np.sum(np.abs(E) ** 2, axis=0))


def average_mixing_cesaro(A, horizon: float = CESARO_HORIZON, steps: int = CESARO_STEPS,
                          block: int = 256) -> AverageMixingMatrix:
    """Trapezoid-rule estimate of ``(1/T) int_0^T M(t) dt``.

    Independent of the eigensolver: ``U(t)`` is propagated from the matrix
    exponential of a single time step.
    """
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    if steps < 100:
        raise ValueError("steps must be at least 100")
    A = hermitize(A)
    n = A.shape[0]
    dt = horizon / steps
    step = expm(-1j * dt * A)
    powers = np.empty((block, n, n), dtype=np.complex128)
    powers[0] = np.eye(n)
    for k in range(1, block):
        powers[k] = step @ powers[k - 1]
    jump = step @ powers[-1]
    total = np.zeros((n, n))
    W = np.eye(n, dtype=np.complex128)
    done = 0
    while done <= steps:
        count = min(block, steps + 1 - done)
        U = powers[:count] @ W
        total += (np.abs(U) ** 2).sum(axis=0)
        done += count
        W = jump @ W
    U0 = np.eye(n)
    Uend = np.abs(expm(-1j * horizon * A)) ** 2
    total -= 0.5 * (U0 + Uend)
    return AverageMixingMatrix(total * dt / horizon)


def trace_lower_bound(sd: SpectralDecomposition) -> float:
    """``(1/n) sum_r m_r^2``, a lower bound on ``trace(average_mixing)``."""
    m = np.asarray(sd.multiplicities, dtype=float)
    return float(np.sum(m ** 2) / m.sum())


def has_average_uniform(A, eps: float = DEFAULT_EPS) -> UniformityReport:
    return is_uniform(average_mixing(A), eps)


@dataclass(frozen=True)
class SearchResult:
    """Outcome of :func:`mixing_time_search`.

    ``time`` is None when no uniform time was found; ``min_time`` and
    ``min_deviation`` record the best point seen either way.
    """

    time: Optional[float]
    report: UniformityReport
    min_time: float
    min_deviation: float

    @property
    def found(self) -> bool:
        return self.time is not None


def _golden_min(f, lo: float, hi: float, width: float = 1e-12):
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > width:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def mixing_time_search(A, t_max: float, eps: float = DEFAULT_EPS,
                       grid: int = DEFAULT_GRID) -> SearchResult:
    """Earliest ``t`` in ``[0, t_max]`` with ``max_ab |M_ab(t) - 1/n| <= eps``.

    Scans a uniform grid, then golden-section refines every grid local minimum
    that could hide a zero, i.e. whose value is within ``10 eps + L h`` where
    ``L`` bounds ``|f'|`` and ``h`` is the grid step.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    if grid < 1000:
        raise ValueError("grid must have at least 1000 points")
    qw = QuantumWalk(A)
    ts = np.linspace(0.0, t_max, grid)
    f = qw.deviations(ts)
    h = ts[1] - ts[0]
    threshold = 10 * eps + qw.lipschitz() * h

    def dev(t):
        return float(qw.deviations([t])[0])

    best_i = int(np.argmin(f))
    best_t, best_f = float(ts[best_i]), float(f[best_i])
    for i in range(grid):
        left = f[i - 1] if i > 0 else np.inf
        right = f[i + 1] if i < grid - 1 else np.inf
        if not (f[i] <= left and f[i] <= right and f[i] <= threshold):
            continue
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, grid - 1)]
        t_star, f_star = _golden_min(dev, lo, hi)
        if f[i] < f_star:
            t_star, f_star = float(ts[i]), float(f[i])
        if f_star < best_f:
            best_t, best_f = t_star, f_star
        if f_star <= eps:
            return SearchResult(t_star, is_uniform(qw.mixing(t_star), eps), best_t, best_f)
    return SearchResult(None, is_uniform(qw.mixing(best_t), eps), best_t, best_f)


def closure_check(A, a: int, B, b: int, t: float, eps: float = DEFAULT_EPS) -> bool:
    """Whether ``A [] B`` mixes locally from ``(a, b)`` at ``t``, given both factors do."""
    for name, M, v in (("first", A, a), ("second", B, b)):
        rep = is_local_uniform(mixing_matrix(M, t), v, eps)
        if not rep.uniform:
            raise PreconditionUnmet(
                f"{name} factor is not locally uniform from {v} at t={t} "
                f"(deviation {rep.max_deviation:.3e})"
            )
    nB = np.asarray(B).shape[0]
    prod = graphs.cartesian_product(A, B)
    return is_local_uniform(mixing_matrix(prod, t), a * nB + b, eps).uniform
