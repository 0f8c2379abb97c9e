"""Graph families, unitary signings and graph products as Hermitian matrices.

Orientation convention: an arc ``u -> v`` is stored as ``A[u][v] = -i`` and
``A[v][u] = +i``. Product vertices ``(a, b)`` are indexed ``a * n_B + b``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import errors
from .linalg import eigh, hermitize, max_norm

SIZE_CAP = 4096
ROW_SUM_TOL = 1e-9
UNIT_TOL = 1e-12


def _check_size(n: int, cap: int = SIZE_CAP) -> None:
    if n > cap:
        raise errors.SizeCap(f"order {n} exceeds size cap {cap}")


def _check_simple_adjacency(A) -> np.ndarray:
    A = hermitize(A)
    if np.any(np.abs(A.diagonal()) > 0):
        raise errors.NotSimpleGraph("adjacency matrix has a nonzero diagonal")
    if not np.all(np.isin(A, (0, 1))):
        raise errors.NotSimpleGraph("adjacency entries must be 0 or 1")
    return A


def zero_kernel_report(A) -> tuple[float, int]:
    """Return ``(max|A 1|, multiplicity of eigenvalue 0)``."""
    A = np.asarray(A)
    residual = max_norm(A @ np.ones(A.shape[0]))
    return residual, eigh(A).multiplicity_of(0.0)


# --- basic families ------------------------------------------------------

def complete(n: int) -> np.ndarray:
    """Adjacency matrix ``J - I`` of the complete graph K_n."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_size(n)
    return (np.ones((n, n)) - np.eye(n)).astype(np.complex128)


def empty(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be positive")
    _check_size(n)
    return np.zeros((n, n), dtype=np.complex128)


def from_edges(n: int, edges, weights=None) -> np.ndarray:
    """Adjacency matrix with ``A[u][v] = w`` and ``A[v][u] = conj(w)`` per edge.

    Unweighted edges get weight 1. Weights must have unit modulus.
    """
    A = np.zeros((n, n), dtype=np.complex128)
    if weights is None:
        weights = [1.0] * len(edges)
    if len(weights) != len(edges):
        raise errors.InvalidGraphSpec("one weight per edge is required")
    for (u, v), w in zip(edges, weights):
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise errors.InvalidGraphSpec(f"bad edge ({u}, {v}) for order {n}")
        if abs(abs(w) - 1.0) > UNIT_TOL:
            raise errors.InvalidGraphSpec(f"signing weight {w} on ({u}, {v}) is not unit modulus")
        A[u, v] = w
        A[v, u] = np.conj(w)
    return A


def path(n: int) -> np.ndarray:
    return from_edges(n, [(j, j + 1) for j in range(n - 1)])


def cycle(n: int) -> np.ndarray:
    if n < 3:
        raise errors.TooSmall("a cycle needs at least 3 vertices")
    return from_edges(n, [(j, (j + 1) % n) for j in range(n)])


def complement(A) -> np.ndarray:
    """``J - I - A`` for a 0/1 adjacency matrix."""
    A = _check_simple_adjacency(A)
    n = A.shape[0]
    return np.ones((n, n), dtype=np.complex128) - np.eye(n) - A


def join(A, B) -> np.ndarray:
    """Join ``X + Y``: block matrix ``[[A, J], [J, B]]``."""
    A = hermitize(A)
    B = hermitize(B)
    na, nb = A.shape[0], B.shape[0]
    _check_size(na + nb)
    out = np.ones((na + nb, na + nb), dtype=np.complex128)
    out[:na, :na] = A
    out[na:, na:] = B
    return out


def claw(n: int) -> np.ndarray:
    """The star K_{1,n}, i.e. the cone over the empty graph."""
    return join(empty(1), empty(n))


def cartesian_product(A, B) -> np.ndarray:
    """Kronecker sum ``A (x) I + I (x) B``."""
    A = hermitize(A)
    B = hermitize(B)
    _check_size(A.shape[0] * B.shape[0])
    return np.kron(A, np.eye(B.shape[0])) + np.kron(np.eye(A.shape[0]), B)


def laplacian(A) -> np.ndarray:
    A = _check_simple_adjacency(A)
    return np.diag(A.sum(axis=1).real).astype(np.complex128) - A


# --- cones ---------------------------------------------------------------

@dataclass(frozen=True)
class ConeInput:
    """Base graph for the conical reduction.

    The base must have the all-ones vector in its kernel and zero as a simple
    eigenvalue. The zero matrix (giving the claw K_{1,n}) is always accepted.
    ``scaled`` divides the cone adjacency by ``n`` so its norm stays bounded.
    """

    base: np.ndarray
    scaled: bool = False

    def validate(self) -> None:
        A = hermitize(self.base)
        residual = max_norm(A @ np.ones(A.shape[0]))
        if residual > ROW_SUM_TOL:
            raise errors.AllOnesNotKernel(
                f"all-ones vector is not in the kernel of the base (max|A1| = {residual:.3e})"
            )
        if max_norm(A) == 0:
            return
        mult = eigh(A).multiplicity_of(0.0)
        if mult != 1:
            raise errors.ZeroNotSimple(f"eigenvalue 0 of the base has multiplicity {mult}, not 1")


def cone(c: ConeInput | np.ndarray, scaled: bool = False) -> np.ndarray:
    """Adjacency ``[[0, 1^T], [1, A]]`` of ``K_1 + X``; vertex 0 is the cone."""
    if not isinstance(c, ConeInput):
        c = ConeInput(np.asarray(c, dtype=np.complex128), scaled)
    c.validate()
    A = hermitize(c.base)
    n = A.shape[0]
    _check_size(n + 1)
    out = np.zeros((n + 1, n + 1), dtype=np.complex128)
    out[0, 1:] = 1
    out[1:, 0] = 1
    out[1:, 1:] = A
    return out / n if c.scaled else out


# --- circulants and signings ---------------------------------------------

def circulant(first_row: Sequence[complex]) -> np.ndarray:
    """Hermitian circulant with ``A[j][k] = c[(k - j) mod n]``."""
    c = np.asarray(first_row, dtype=np.complex128)
    n = len(c)
    if n < 1:
        raise errors.InvalidGraphSpec("first row must be nonempty")
    _check_size(n)
    mirrored = np.conj(np.roll(c[::-1], 1))
    if abs(c[0].imag) > UNIT_TOL or max_norm(c - mirrored) > UNIT_TOL:
        raise errors.NotHermitianCirculant("circulant first row needs c0 real and c[n-k] = conj(c[k])")
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return hermitize(c[idx])


def odd_clique_signing(n: int) -> np.ndarray:
    """The +-i circulant ``cir(0, -i, i, -i, ..., i)`` signing K_n for odd n."""
    if n < 3 or n % 2 == 0:
        raise errors.NotOdd(f"odd clique signing needs odd n >= 3, got {n}")
    row = [0] + [-1j if k % 2 else 1j for k in range(1, n)]
    A = circulant(row)
    _self_check(A, "odd_clique_signing")
    return A


def _even_blocks(m: int):
    w = np.exp(2j * np.pi / (2 * m + 1))

    def B(k):
        if k == 0:
            return np.array([[0, 1], [1, 0]], dtype=np.complex128)
        return np.array([[w ** (2 * k - 1), w ** (2 * k)], [w ** (2 * k), w ** (2 * k - 1)]])

    def Bt(k):
        return np.array([[w ** (2 * k), w ** (2 * k - 1)], [w ** (2 * k - 1), w ** (2 * k)]])

    return B, Bt


def even_clique_signing(n: int) -> np.ndarray:
    """Skew block circulant signing of K_n (n even) by roots of unity.

    With ``n = 2m + 2`` and ``w = exp(2 pi i / (2m + 1))`` the block in block
    row ``J`` and block column ``K`` is ``B_{K-J}`` on or above the diagonal and
    ``Btilde_{m+1-(J-K)}`` below it.
    """
    if n < 4 or n % 2:
        raise errors.NotEven(f"even clique signing needs even n >= 4, got {n}")
    _check_size(n)
    m = (n - 2) // 2
    B, Bt = _even_blocks(m)
    C = np.zeros((n, n), dtype=np.complex128)
    for J in range(m + 1):
        for K in range(m + 1):
            block = B(K - J) if K >= J else Bt(m + 1 - (J - K))
            C[2 * J:2 * J + 2, 2 * K:2 * K + 2] = block
    if max_norm(C - C.conj().T) > 1e-12:
        raise errors.ConstructionCheckFailed("even clique signing is not Hermitian")
    C = (C + C.conj().T) / 2
    _self_check(C, "even_clique_signing")
    return C


def _self_check(A, name: str) -> None:
    residual, mult = zero_kernel_report(A)
    if residual > ROW_SUM_TOL:
        raise errors.ConstructionCheckFailed(f"{name}: row sums not zero (max {residual:.3e})")
    if mult != 1:
        raise errors.ConstructionCheckFailed(f"{name}: eigenvalue 0 has multiplicity {mult}")


def k4_chiral_signing() -> np.ndarray:
    """Oriented K_4 switching equivalent to K_1 + oriented triangle."""
    i = 1j
    return np.array(
        [
            [0, -i, -i, -i],
            [i, 0, -i, i],
            [i, i, 0, -i],
            [i, -i, i, 0],
        ],
        dtype=np.complex128,
    )


def k1_plus_oriented_triangle() -> np.ndarray:
    """Cone over the oriented 3-cycle with real cone edges."""
    i = 1j
    return np.array(
        [
            [0, 1, 1, 1],
            [1, 0, -i, i],
            [1, i, 0, -i],
            [1, -i, i, 0],
        ],
        dtype=np.complex128,
    )


def oriented_cycle(n: int) -> np.ndarray:
    """Directed cycle ``j -> j+1`` as ``cir(0, -i, 0, ..., 0, i)``."""
    if n < 3:
        raise errors.TooSmall(f"oriented cycle needs n >= 3, got {n}")
    row = np.zeros(n, dtype=np.complex128)
    row[1] = -1j
    row[-1] = 1j
    return circulant(row)


def skew_shift(n: int) -> np.ndarray:
    """``P e_j = e_{j-1}`` for ``j >= 1`` and ``P e_0 = -e_{n-1}``."""
    P = np.zeros((n, n), dtype=np.complex128)
    for j in range(1, n):
        P[j - 1, j] = 1
    P[n - 1, 0] = -1
    return P


def skew_circulant(first_row: Sequence[complex]) -> np.ndarray:
    """``sum_j a_j P^j`` for the skew shift ``P``; generally not Hermitian."""
    a = np.asarray(first_row, dtype=np.complex128)
    n = len(a)
    if n < 1:
        raise errors.InvalidGraphSpec("first row must be nonempty")
    _check_size(n)
    P = skew_shift(n)
    out = np.zeros((n, n), dtype=np.complex128)
    Pj = np.eye(n, dtype=np.complex128)
    for aj in a:
        out += aj * Pj
        Pj = Pj @ P
    return out


def transitive_tournament_spectrum(n: int) -> np.ndarray:
    """Closed form ``cot((2j+1) pi / 2n)``, sorted increasingly."""
    j = np.arange(n)
    return np.sort(1.0 / np.tan((2 * j + 1) * np.pi / (2 * n)))


def transitive_tournament(n: int) -> np.ndarray:
    """``-i * skew_circulant(0, 1, ..., 1)``: arcs ``u -> v`` for all ``u < v``."""
    if n < 2:
        raise errors.TooSmall(f"transitive tournament needs n >= 2, got {n}")
    A = hermitize(-1j * skew_circulant([0] + [1] * (n - 1)))
    got = eigh(A).all_eigenvalues()
    want = transitive_tournament_spectrum(n)
    if len(got) != n or np.max(np.abs(got - want)) > 1e-8:
        raise errors.SpectrumMismatch("transitive tournament spectrum differs from cot formula")
    return A


def hamming(n: int, d: int, signing: Optional[str] = None, cap: int = SIZE_CAP) -> np.ndarray:
    """H(n, d) as the n-fold Cartesian power of K_d (or of the chiral K_4)."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    if d ** n > cap:
        raise errors.SizeCap(f"H({n},{d}) has {d ** n} vertices, above cap {cap}")
    if signing is None or signing == "none":
        factor = complete(d)
    elif signing == "k4_chiral":
        if d != 4:
            raise errors.SigningRequiresD4("k4_chiral signing requires d = 4")
        factor = k4_chiral_signing()
    else:
        raise errors.InvalidGraphSpec(f"unknown Hamming signing {signing!r}")
    A = factor
    for _ in range(n - 1):
        A = cartesian_product(A, factor)
    return A


# --- Eulerian orientation -------------------------------------------------

def _components(n: int, edges) -> list[set]:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = set()
    comps = []
    for s in range(n):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in comp:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        comps.append(comp)
    return comps


def eulerian_circuit(n: int, edges) -> list[tuple[int, int]]:
    """Hierholzer's algorithm; returns the circuit as a list of traversed arcs."""
    edges = [tuple(e) for e in edges]
    if not edges:
        raise errors.NotEulerian("graph has no edges")
    for u, v in edges:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise errors.InvalidGraphSpec(f"bad edge ({u}, {v}) for order {n}")
    deg = np.zeros(n, dtype=int)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    odd = [int(v) for v in np.flatnonzero(deg % 2)]
    if odd:
        raise errors.NotEulerian(f"vertices {odd} have odd degree")
    if len(_components(n, edges)) > 1:
        raise errors.Disconnected("graph is not connected")
    incident = [[] for _ in range(n)]
    for idx, (u, v) in enumerate(edges):
        incident[u].append((idx, v))
        incident[v].append((idx, u))
    used = [False] * len(edges)
    ptr = [0] * n
    stack = [(edges[0][0], None)]
    circuit = []
    while stack:
        u, via = stack[-1]
        while ptr[u] < len(incident[u]) and used[incident[u][ptr[u]][0]]:
            ptr[u] += 1
        if ptr[u] == len(incident[u]):
            stack.pop()
            if via is not None:
                circuit.append((via, u))
        else:
            idx, v = incident[u][ptr[u]]
            used[idx] = True
            stack.append((v, u))
    circuit.reverse()
    return circuit


def eulerian_orientation_signing(edges, n: int) -> np.ndarray:
    """+-i signing that orients every edge along an Eulerian circuit."""
    A = np.zeros((n, n), dtype=np.complex128)
    for u, v in eulerian_circuit(n, edges):
        A[u, v] += -1j
        A[v, u] += 1j
    residual = max_norm(A @ np.ones(n))
    if residual > ROW_SUM_TOL:
        raise errors.ConstructionCheckFailed(f"Eulerian signing row sums nonzero ({residual:.3e})")
    return A


# --- Cayley graphs --------------------------------------------------------

def _validate_group(table: np.ndarray) -> tuple[int, np.ndarray]:
    n = table.shape[0]
    if table.shape != (n, n) or not np.all((table >= 0) & (table < n)):
        raise errors.InvalidGroupTable("table must be n x n with entries in range(n)")
    for row in table:
        if len(set(row.tolist())) != n:
            raise errors.InvalidGroupTable("table rows are not permutations")
    for col in table.T:
        if len(set(col.tolist())) != n:
            raise errors.InvalidGroupTable("table columns are not permutations")
    ids = [e for e in range(n) if np.array_equal(table[e], np.arange(n)) and np.array_equal(table[:, e], np.arange(n))]
    if not ids:
        raise errors.InvalidGroupTable("no identity element")
    e = ids[0]
    # (ab)c = a(bc)
    lhs = table[table[:, :, None], np.arange(n)[None, None, :]]
    rhs = table[np.arange(n)[:, None, None], table[None, :, :]]
    if not np.array_equal(lhs, rhs):
        raise errors.InvalidGroupTable("operation is not associative")
    inv = np.array([int(np.flatnonzero(table[g] == e)[0]) for g in range(n)])
    return e, inv


def cayley_graph(table, connection) -> np.ndarray:
    """0/1 adjacency with ``A[g][h] = 1`` iff ``h g^{-1}`` is in the connection set."""
    table = np.asarray(table, dtype=int)
    e, inv = _validate_group(table)
    S = set(int(s) for s in connection)
    if e in S:
        raise errors.ConnectionContainsIdentity("connection set contains the identity")
    if any(int(inv[s]) not in S for s in S):
        raise errors.ConnectionNotInverseClosed("connection set is not closed under inverses")
    n = table.shape[0]
    A = np.zeros((n, n), dtype=np.complex128)
    for g in range(n):
        for h in range(n):
            if int(table[h, inv[g]]) in S:
                A[g, h] = 1
    return A


def cyclic_group_table(n: int) -> np.ndarray:
    a = np.arange(n)
    return (a[:, None] + a[None, :]) % n


def symmetric_group_s3():
    """Multiplication table of S_3 and the indices of its three transpositions.

    Elements are permutations of (0, 1, 2) in lexicographic order;
    ``table[a][b]`` is the composition ``a o b``.
    """
    from itertools import permutations

    perms = list(permutations(range(3)))
    index = {p: k for k, p in enumerate(perms)}
    table = np.zeros((6, 6), dtype=int)
    for a, pa in enumerate(perms):
        for b, pb in enumerate(perms):
            table[a, b] = index[tuple(pa[pb[x]] for x in range(3))]
    transpositions = [k for k, p in enumerate(perms) if sum(p[x] != x for x in range(3)) == 2]
    return table, transpositions


# --- GraphSpec -------------------------------------------------------------

KINDS = (
    "complete", "empty", "cycle", "claw", "path", "explicit", "circulant",
    "skew_circulant", "cayley", "hamming",
)
SIGNINGS = (
    "none", "odd_pm_i", "even_roots", "k4_chiral", "oriented_cycle",
    "transitive_tournament", "eulerian",
)


def _pair_to_complex(x) -> complex:
    if isinstance(x, (int, float, complex)):
        return complex(x)
    if len(x) != 2:
        raise errors.InvalidGraphSpec(f"expected [re, im], got {x!r}")
    return complex(x[0], x[1])


@dataclass
class GraphSpec:
    """Declarative description of a graph, as read from JSON.

    ``signing`` is either one of :data:`SIGNINGS` or a list of unit-modulus
    edge weights (``explicit`` kind only). ``cone`` wraps the result in
    :func:`cone`, with ``scaled`` passed through.
    """

    kind: str
    n: Optional[int] = None
    d: Optional[int] = None
    first_row: Optional[list] = None
    edges: Optional[list] = None
    table: Optional[list] = None
    connection: Optional[list] = None
    signing: object = None
    cone: bool = False
    scaled: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "GraphSpec":
        if "kind" not in data:
            raise errors.InvalidGraphSpec("GraphSpec needs a 'kind' field")
        known = {"kind", "n", "d", "first_row", "edges", "table", "connection", "signing", "cone", "scaled"}
        unknown = set(data) - known
        if unknown:
            raise errors.InvalidGraphSpec(f"unknown GraphSpec fields: {sorted(unknown)}")
        return cls(**{k: data[k] for k in known if k in data})

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for key in ("n", "d", "first_row", "edges", "table", "connection", "signing"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.cone:
            out["cone"] = True
        if self.scaled:
            out["scaled"] = True
        return out

    def _need(self, name):
        value = getattr(self, name)
        if value is None:
            raise errors.InvalidGraphSpec(f"kind {self.kind!r} requires field {name!r}")
        return value

    def base_matrix(self) -> np.ndarray:
        """Build the graph before any cone wrapping."""
        kind = self.kind
        sig = self.signing if self.signing is not None else "none"
        if isinstance(sig, str) and sig not in SIGNINGS:
            raise errors.InvalidGraphSpec(f"unknown signing {sig!r}")
        if kind not in KINDS:
            raise errors.InvalidGraphSpec(f"unknown kind {kind!r}")

        if kind == "complete":
            n = self._need("n")
            builders = {
                "none": complete,
                "odd_pm_i": odd_clique_signing,
                "even_roots": even_clique_signing,
                "transitive_tournament": transitive_tournament,
            }
            if sig == "k4_chiral":
                if n != 4:
                    raise errors.SigningRequiresD4("k4_chiral signing needs n = 4")
                return k4_chiral_signing()
            if sig not in builders:
                raise errors.InvalidGraphSpec(f"signing {sig!r} does not apply to complete graphs")
            return builders[sig](n)
        if kind == "empty":
            return empty(self._need("n"))
        if kind == "cycle":
            n = self._need("n")
            if sig == "oriented_cycle":
                return oriented_cycle(n)
            if sig == "eulerian":
                return eulerian_orientation_signing([(j, (j + 1) % n) for j in range(n)], n)
            return cycle(n)
        if kind == "claw":
            return claw(self._need("n"))
        if kind == "path":
            return path(self._need("n"))
        if kind == "explicit":
            n = self._need("n")
            edges = [tuple(e) for e in self._need("edges")]
            if isinstance(sig, list):
                return from_edges(n, edges, [_pair_to_complex(w) for w in sig])
            if sig == "eulerian":
                return eulerian_orientation_signing(edges, n)
            if sig != "none":
                raise errors.InvalidGraphSpec(f"signing {sig!r} does not apply to explicit graphs")
            return from_edges(n, edges)
        if kind == "circulant":
            return circulant([_pair_to_complex(x) for x in self._need("first_row")])
        if kind == "skew_circulant":
            if sig == "transitive_tournament":
                return transitive_tournament(self._need("n"))
            return skew_circulant([_pair_to_complex(x) for x in self._need("first_row")])
        if kind == "cayley":
            return cayley_graph(self._need("table"), self._need("connection"))
        if kind == "hamming":
            return hamming(self._need("n"), self._need("d"), None if sig == "none" else sig)
        raise errors.InvalidGraphSpec(f"unhandled kind {kind!r}")  # pragma: no cover

    def build(self) -> np.ndarray:
        A = self.base_matrix()
        if self.cone:
            return cone(ConeInput(A, self.scaled))
        return A


def build(spec: GraphSpec | dict) -> np.ndarray:
    if isinstance(spec, dict):
        spec = GraphSpec.from_dict(spec)
    return spec.build()
