"""Dense complex linear algebra: Hermitian checks, a cyclic complex Jacobi
eigensolver, and spectral projectors.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Hermitian
matrices are arrays that have been passed through :func:`hermitize`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceFailure, NotHermitian, NotSquare, ShapeMismatch

HERMITIAN_RTOL = 1e-10
JACOBI_RTOL = 1e-12
JACOBI_MAX_SWEEPS = 100
GROUPING_RTOL = 1e-8


def as_matrix(M) -> np.ndarray:
    """Coerce to a 2-D complex128 array with finite entries."""
    M = np.array(M, dtype=np.complex128)
    if M.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got shape {M.shape}")
    if M.size == 0:
        raise ShapeMismatch("matrix must have at least one entry")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def max_norm(M) -> float:
    """Largest entry modulus."""
    return float(np.max(np.abs(M))) if np.size(M) else 0.0


def row_sum_norm(M) -> float:
    """Max-row-sum (infinity) norm."""
    return float(np.max(np.sum(np.abs(M), axis=1)))


def hermitize(M) -> np.ndarray:
    """Return ``(M + M^dagger)/2`` after checking ``M`` is Hermitian up to rounding.

    Raises
    ------
    NotSquare
        If ``M`` is not square.
    NotHermitian
        If ``max|M - M^dagger|`` exceeds ``1e-10 * max(1, max|M|)``.
    """
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise NotSquare(f"matrix of shape {M.shape} is not square")
    dev = np.abs(M - M.conj().T)
    worst = float(dev.max())
    if worst > HERMITIAN_RTOL * max(1.0, max_norm(M)):
        a, b = np.unravel_index(int(np.argmax(dev)), dev.shape)
        raise NotHermitian(
            f"|A[{a}][{b}] - conj(A[{b}][{a}])| = {worst:.3e} exceeds tolerance"
        )
    H = (M + M.conj().T) / 2
    H[np.diag_indices_from(H)] = H.diagonal().real
    return H


def schur_product(A, B) -> np.ndarray:
    """Entrywise product ``A o B``."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise ShapeMismatch(f"shapes {A.shape} and {B.shape} differ")
    return A * B


def _jacobi_pair(app: float, aqq: float, apq: complex) -> np.ndarray:
    # 2x2 unitary G with G^dagger [[app, apq], [conj(apq), aqq]] G diagonal
    r = abs(apq)
    theta = (aqq - app) / (2.0 * r)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
        if theta < 0:
            t = -t
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    ph = np.conj(apq / r)
    return np.array([[c, s], [-s * ph, c * ph]], dtype=np.complex128)


def jacobi_eigh(H, tol: float | None = None, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic complex Jacobi diagonalization of a Hermitian matrix.

    Returns ``(w, V)`` with ``H V = V diag(w)``; eigenvalues are unsorted.
    Converges when the off-diagonal Frobenius norm drops to
    ``1e-12 * max(1, ||H||_inf)`` and raises :class:`ConvergenceFailure`
    after ``max_sweeps`` sweeps otherwise.
    """
    a = np.array(H, dtype=np.complex128)
    n = a.shape[0]
    if tol is None:
        tol = JACOBI_RTOL * max(1.0, row_sum_norm(a))
    V = np.eye(n, dtype=np.complex128)
    off_mask = ~np.eye(n, dtype=bool)
    for sweep in range(max_sweeps + 1):
        off = float(np.sqrt(np.sum(np.abs(a[off_mask]) ** 2)))
        if off <= tol:
            return a.diagonal().real.copy(), V
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                G = _jacobi_pair(a[p, p].real, a[q, q].real, apq)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ G
                a[idx, :] = G.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                V[:, idx] = V[:, idx] @ G
    raise ConvergenceFailure(
        f"Jacobi did not converge in {max_sweeps} sweeps; off-diagonal norm {off:.3e}"
    )


def _orthonormalize(Q: np.ndarray) -> np.ndarray:
    # modified Gram-Schmidt, two passes
    Q = Q.copy()
    k = Q.shape[1]
    for _ in range(2):
        for j in range(k):
            for i in range(j):
                Q[:, j] -= np.vdot(Q[:, i], Q[:, j]) * Q[:, i]
            Q[:, j] /= np.linalg.norm(Q[:, j])
    return Q


@dataclass(frozen=True)
class SpectralDecomposition:
    """``A = sum_r eigenvalues[r] * projectors[r]`` with distinct eigenvalues.

    ``projectors`` is stacked as an array of shape ``(d, n, n)``.
    """

    eigenvalues: np.ndarray
    multiplicities: tuple
    projectors: np.ndarray
    source_norm: float

    @property
    def n(self) -> int:
        return self.projectors.shape[1]

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def multiplicity_of(self, value: float, tol: float | None = None) -> int:
        """Multiplicity of ``value`` (0 if it is not an eigenvalue)."""
        if tol is None:
            tol = GROUPING_RTOL * max(1.0, self.source_norm)
        for lam, m in zip(self.eigenvalues, self.multiplicities):
            if abs(lam - value) <= tol:
                return m
        return 0

    def all_eigenvalues(self) -> np.ndarray:
        """Eigenvalues repeated by multiplicity, increasing."""
        return np.repeat(self.eigenvalues, self.multiplicities)


def eigh(A) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix with grouped eigenvalues.

    Eigenvalues closer than ``1e-8 * max(1, ||A||_inf)`` (after sorting) are
    merged into one group whose projector is built from orthonormalized
    eigenvectors.
    """
    A = hermitize(A)
    norm = row_sum_norm(A)
    w, V = jacobi_eigh(A)
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = V[:, order]
    tau = GROUPING_RTOL * max(1.0, norm)
    groups = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[groups[-1][-1]] <= tau:
            groups[-1].append(i)
        else:
            groups.append([i])
    eigenvalues = np.array([w[g].mean() for g in groups])
    projectors = []
    for g in groups:
        Q = _orthonormalize(V[:, g])
        projectors.append(Q @ Q.conj().T)
    return SpectralDecomposition(
        eigenvalues=eigenvalues,
        multiplicities=tuple(len(g) for g in groups),
        projectors=np.array(projectors),
        source_norm=norm,
    )


def spectral_apply(sd: SpectralDecomposition, f: Callable[[float], complex]) -> np.ndarray:
    """Return ``sum_r f(lambda_r) E_r``."""
    coeffs = np.array([f(float(lam)) for lam in sd.eigenvalues], dtype=np.complex128)
    return np.tensordot(coeffs, sd.projectors, axes=1)


def decomposition_residuals(sd: SpectralDecomposition, A=None) -> dict:
    """Numerical residuals of the decomposition invariants (all should be tiny)."""
    n = sd.n
    E = sd.projectors
    out = {
        "idempotence": max(max_norm(P @ P - P) for P in E),
        "hermitian": max(max_norm(P - P.conj().T) for P in E),
        "resolution": max_norm(E.sum(axis=0) - np.eye(n)),
        "trace": max(abs(np.trace(P).real - m) for P, m in zip(E, sd.multiplicities)),
        "orthogonality": max(
            (max_norm(E[r] @ E[s]) for r in range(len(E)) for s in range(len(E)) if r != s),
            default=0.0,
        ),
    }
    if A is not None:
        out["reconstruction"] = max_norm(spectral_apply(sd, lambda x: x) - np.asarray(A))
    return out


def to_json_dict(M) -> dict:
    """Serialize a matrix as ``{"n": rows, "entries": [[re, im], ...]}`` row-major.

    Rectangular matrices additionally carry ``"m"`` (column count).
    """
    M = np.asarray(M, dtype=np.complex128)
    out = {"n": int(M.shape[0])}
    if M.shape[0] != M.shape[1]:
        out["m"] = int(M.shape[1])
    out["entries"] = [[float(z.real), float(z.imag)] for z in M.ravel()]
    return out


def from_json_dict(data: dict) -> np.ndarray:
    """Inverse of :func:`to_json_dict`."""
    try:
        n = int(data["n"])
        m = int(data.get("m", n))
        entries = data["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"matrix JSON needs 'n' and 'entries': {exc}") from None
    if len(entries) != n * m:
        raise ValueError(f"matrix JSON has {len(entries)} entries, expected {n * m}")
    flat = []
    for i, pair in enumerate(entries):
        if isinstance(pair, (int, float)):
            flat.append(complex(pair))
        elif len(pair) == 2:
            flat.append(complex(pair[0], pair[1]))
        else:
            raise ValueError(f"entry {i} is not a [re, im] pair")
    return as_matrix(np.array(flat).reshape(n, m))
