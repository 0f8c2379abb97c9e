"""Equitable partitions of Hermitian matrices, quotient walks and switching."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CellNotSingleton,
    ClosedFormMismatch,
    InvalidPartition,
    NotEquitable,
    ShapeMismatch,
    SupportMismatch,
)
from .linalg import hermitize, max_norm
from .mixing import QuantumWalk

SUM_TOL = 1e-9


@dataclass(frozen=True)
class EquitablePartition:
    """A verified equitable partition.

    ``row_sums[j, k]`` and ``col_sums[j, k]`` are the constant row and column
    sums of the block ``A[V_j, V_k]``; ``S`` is the normalized characteristic
    matrix with ``S[v, k] = 1/sqrt(n_k)`` for ``v`` in ``V_k``.
    """

    cells: tuple
    cell_sizes: tuple
    row_sums: np.ndarray
    col_sums: np.ndarray
    S: np.ndarray

    @property
    def m(self) -> int:
        return len(self.cells)

    def cell_of(self, v: int) -> int:
        for k, cell in enumerate(self.cells):
            if v in cell:
                return k
        raise InvalidPartition(f"vertex {v} is in no cell")


def parse_cells(text: str) -> list[list[int]]:
    """Parse ``"0|1,2,3"`` into ``[[0], [1, 2, 3]]``."""
    try:
        return [[int(x) for x in part.split(",") if x.strip()] for part in text.split("|")]
    except ValueError:
        raise InvalidPartition(f"cannot parse cells {text!r}") from None


def characteristic_matrix(cells: Sequence[Sequence[int]], n: int) -> np.ndarray:
    S = np.zeros((n, len(cells)))
    for k, cell in enumerate(cells):
        S[list(cell), k] = 1.0 / np.sqrt(len(cell))
    return S


def _check_partition(cells, n: int) -> tuple:
    cells = tuple(tuple(int(v) for v in cell) for cell in cells)
    flat = [v for cell in cells for v in cell]
    if any(len(cell) == 0 for cell in cells):
        raise InvalidPartition("cells must be nonempty")
    if sorted(flat) != list(range(n)):
        raise InvalidPartition(f"cells do not partition range({n})")
    return cells


def verify_equitable(A, cells) -> EquitablePartition:
    """Check constant row and column sums on every block of ``A``.

    Raises :class:`NotEquitable` naming the first block ``(j, k)`` and the row
    (or column) inside it that breaks the pattern.
    """
    A = hermitize(A)
    n = A.shape[0]
    cells = _check_partition(cells, n)
    m = len(cells)
    r = np.zeros((m, m), dtype=np.complex128)
    c = np.zeros((m, m), dtype=np.complex128)
    for j, Vj in enumerate(cells):
        for k, Vk in enumerate(cells):
            block = A[np.ix_(Vj, Vk)]
            rows = block.sum(axis=1)
            bad = np.flatnonzero(np.abs(rows - rows[0]) > SUM_TOL)
            if bad.size:
                raise NotEquitable(j, k, Vj[bad[0]],
                                   f"block ({j},{k}): row {Vj[bad[0]]} sums to {rows[bad[0]]}, expected {rows[0]}")
            cols = block.sum(axis=0)
            bad = np.flatnonzero(np.abs(cols - cols[0]) > SUM_TOL)
            if bad.size:
                raise NotEquitable(j, k, Vk[bad[0]],
                                   f"block ({j},{k}): column {Vk[bad[0]]} sums to {cols[bad[0]]}, expected {cols[0]}")
            r[j, k] = rows.mean()
            c[j, k] = cols.mean()
    return EquitablePartition(
        cells=cells,
        cell_sizes=tuple(len(V) for V in cells),
        row_sums=r,
        col_sums=c,
        S=characteristic_matrix(cells, n),
    )


def partition_residuals(p: EquitablePartition, A) -> dict:
    """Residuals of the identities an equitable partition must satisfy."""
    S = p.S
    P = S @ S.T
    A = np.asarray(A)
    return {
        "StS": max_norm(S.T @ S - np.eye(p.m)),
        "commutator": max_norm(P @ A - A @ P),
        "conjugate_sums": max_norm(p.row_sums - p.col_sums.T.conj()),
        "diagonal_imag": float(max(np.abs(p.row_sums.diagonal().imag).max(),
                                   np.abs(p.col_sums.diagonal().imag).max())),
    }


def quotient_closed_form(p: EquitablePartition) -> np.ndarray:
    """``sqrt(|r_jk| |c_jk|) exp(i Arg r_jk)`` entrywise."""
    r, c = p.row_sums, p.col_sums
    return np.sqrt(np.abs(r) * np.abs(c)) * np.exp(1j * np.angle(r))


def quotient_matrix(p: EquitablePartition, A) -> np.ndarray:
    """``B = S^T A S``, cross-checked against the closed form from block sums."""
    A = np.asarray(A, dtype=np.complex128)
    B = p.S.T @ A @ p.S
    gap = max_norm(B - quotient_closed_form(p))
    if gap > 1e-9:
        raise ClosedFormMismatch(f"S^T A S differs from the block-sum closed form by {gap:.3e}")
    return hermitize(B)


def quotient_walk_check(p: EquitablePartition, A, t: float) -> float:
    """``max|exp(-iBt) - S^T exp(-iAt) S|``."""
    B = quotient_matrix(p, A)
    lhs = QuantumWalk(B).unitary(t)
    rhs = p.S.T @ QuantumWalk(A).unitary(t) @ p.S
    return max_norm(lhs - rhs)


def singleton_entry_check(p: EquitablePartition, A, u: int, v: int, t: float) -> float:
    """``|exp(-iBt)[V(v), V(u)] - exp(-iAt)[v, u]|`` for singleton cells."""
    i, j = p.cell_of(u), p.cell_of(v)
    for w, k in ((u, i), (v, j)):
        if p.cell_sizes[k] != 1:
            raise CellNotSingleton(f"vertex {w} lies in cell {k} of size {p.cell_sizes[k]}")
    B = quotient_matrix(p, A)
    quotient_entry = QuantumWalk(B).unitary(t)[j, i]
    full_entry = QuantumWalk(A).unitary(t)[v, u]
    return float(abs(quotient_entry - full_entry))


@dataclass(frozen=True)
class SwitchingCertificate:
    """Diagonal unitary ``D`` with ``D^dagger A1 D = A2`` up to ``residual``."""

    D: np.ndarray
    residual: float

    @property
    def phases(self) -> np.ndarray:
        return self.D.diagonal().copy()


def switching_certificate(A1, A2, tol: float = 1e-9) -> Optional[SwitchingCertificate]:
    """Find ``D`` with ``A2 = D^dagger A1 D``, or return None.

    Each connected component of the common support gets root phase 1; the
    other phases follow a BFS tree via ``d_v = d_u A2[u][v] / A1[u][v]`` and
    every remaining entry is then validated.
    """
    A1 = hermitize(A1)
    A2 = hermitize(A2)
    if A1.shape != A2.shape:
        raise ShapeMismatch(f"orders differ: {A1.shape} vs {A2.shape}")
    if max_norm(np.abs(A1) - np.abs(A2)) > tol:
        raise SupportMismatch("entrywise moduli of the two matrices differ")
    n = A1.shape[0]
    support = (np.abs(A1) > tol) & ~np.eye(n, dtype=bool)
    d = np.zeros(n, dtype=np.complex128)
    seen = np.zeros(n, dtype=bool)
    for root in range(n):
        if seen[root]:
            continue
        d[root] = 1.0
        seen[root] = True
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in np.flatnonzero(support[u]):
                if not seen[v]:
                    ratio = A2[u, v] / A1[u, v]
                    d[v] = d[u] * ratio / abs(ratio)
                    seen[v] = True
                    queue.append(v)
    D = np.diag(d)
    residual = max_norm(D.conj().T @ A1 @ D - A2)
    if residual > tol:
        return None
    return SwitchingCertificate(D, residual)


def relabel(A, perm: Sequence[int]) -> np.ndarray:
    """Move vertex ``a`` to position ``perm[a]``."""
    A = np.asarray(A)
    perm = np.asarray(perm)
    n = A.shape[0]
    if sorted(perm.tolist()) != list(range(n)):
        raise InvalidPartition(f"{perm.tolist()} is not a permutation of range({n})")
    out = np.empty_like(A)
    out[np.ix_(perm, perm)] = A
    return out
