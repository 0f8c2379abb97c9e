import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from chiralwalk import graphs
from chiralwalk.errors import (
    CellNotSingleton,
    InvalidPartition,
    NotEquitable,
    ShapeMismatch,
    SupportMismatch,
)
from chiralwalk.mixing import mixing_matrix
from chiralwalk.quotient import (
    parse_cells,
    partition_residuals,
    quotient_closed_form,
    quotient_matrix,
    quotient_walk_check,
    relabel,
    singleton_entry_check,
    switching_certificate,
    verify_equitable,
)

SQ3 = math.sqrt(3.0)
CONE_LEAVES = [[0], [1, 2, 3]]


@pytest.fixture
def claw():
    return graphs.claw(3)


@pytest.fixture
def signed_cone():
    return graphs.cone(graphs.odd_clique_signing(3))


@pytest.mark.parametrize("text, cells", [
    ("0|1,2,3", [[0], [1, 2, 3]]),
    ("0,1|2", [[0, 1], [2]]),
    ("3", [[3]]),
])
def test_parse_cells(text, cells):
    assert parse_cells(text) == cells


def test_parse_cells_rejects_garbage():
    with pytest.raises(InvalidPartition):
        parse_cells("0|a,b")


def test_claw_partition(claw):
    p = verify_equitable(claw, CONE_LEAVES)
    assert p.row_sums[0, 1] == 3
    assert p.col_sums[0, 1] == 1
    assert p.cell_sizes == (1, 3)
    assert p.cell_of(2) == 1


def test_signed_cone_partition(signed_cone):
    p = verify_equitable(signed_cone, CONE_LEAVES)
    assert abs(p.row_sums[1, 1]) < 1e-12
    assert abs(p.col_sums[1, 1]) < 1e-12


def test_path_not_equitable():
    with pytest.raises(NotEquitable) as info:
        verify_equitable(graphs.path(3), [[0, 1], [2]])
    # block (0,0) is a single edge and fine; vertices 0 and 1 see cell {2} differently
    assert (info.value.j, info.value.k) == (0, 1)


@pytest.mark.parametrize("cells", [[[0, 1], [1, 2, 3]], [[0], [1, 2]], [[0], [], [1, 2, 3]]])
def test_invalid_partitions(claw, cells):
    with pytest.raises(InvalidPartition):
        verify_equitable(claw, cells)


@pytest.mark.parametrize("A, cells", [
    (graphs.claw(3), CONE_LEAVES),
    (graphs.cone(graphs.odd_clique_signing(3)), CONE_LEAVES),
    (graphs.k1_plus_oriented_triangle(), CONE_LEAVES),
    (graphs.cone(graphs.even_clique_signing(6)), [[0], list(range(1, 7))]),
    (graphs.complete(4), [[0, 1], [2, 3]]),
    (graphs.claw(3), [[0], [1], [2, 3]]),
])
def test_partition_identities(A, cells):
    p = verify_equitable(A, cells)
    res = partition_residuals(p, A)
    assert res["StS"] <= 1e-12
    assert res["commutator"] <= 1e-9
    assert res["conjugate_sums"] <= 1e-9
    assert res["diagonal_imag"] <= 1e-9


@pytest.mark.parametrize("A", [graphs.claw(3), graphs.cone(graphs.odd_clique_signing(3))],
                         ids=["claw", "signed_cone"])
def test_quotient_is_edge(A):
    B = quotient_matrix(verify_equitable(A, CONE_LEAVES), A)
    assert_allclose(B, [[0, SQ3], [SQ3, 0]], atol=1e-12)


def test_quotient_single_cell():
    A = graphs.complete(3)
    assert_allclose(quotient_matrix(verify_equitable(A, [[0, 1, 2]]), A), [[2]], atol=1e-12)


def test_closed_form_agrees_with_sts():
    A = graphs.cone(graphs.even_clique_signing(4))
    p = verify_equitable(A, [[0], [1, 2, 3, 4]])
    assert_allclose(quotient_closed_form(p), p.S.T @ A @ p.S, atol=1e-9)


def test_quotient_eigenvalues_are_submultiset():
    A = graphs.claw(4)
    B = quotient_matrix(verify_equitable(A, [[0], [1, 2, 3, 4]]), A)
    full = list(np.linalg.eigvalsh(A))
    for mu in np.linalg.eigvalsh(B):
        k = int(np.argmin([abs(mu - x) for x in full]))
        assert abs(full.pop(k) - mu) < 1e-9


@pytest.mark.parametrize("t", [0.0, math.pi / (3 * SQ3), 0.7, 2.3])
@pytest.mark.parametrize("A", [graphs.claw(3), graphs.cone(graphs.odd_clique_signing(3))],
                         ids=["claw", "signed_cone"])
def test_quotient_walk(A, t):
    p = verify_equitable(A, CONE_LEAVES)
    assert quotient_walk_check(p, A, t) <= 1e-8


def test_singleton_entry(claw):
    p = verify_equitable(claw, [[0], [1], [2, 3]])
    assert singleton_entry_check(p, claw, 0, 0, 1.0) <= 1e-8
    assert singleton_entry_check(p, claw, 1, 0, 1.0) <= 1e-8
    assert singleton_entry_check(p, claw, 1, 1, 0.0) == pytest.approx(0, abs=1e-14)


def test_singleton_entry_rejects_big_cell(claw):
    p = verify_equitable(claw, [[0], [1], [2, 3]])
    with pytest.raises(CellNotSingleton):
        singleton_entry_check(p, claw, 2, 0, 1.0)


# ----------------------------------------------------------------------------
# switching
# ----------------------------------------------------------------------------

def test_switching_chiral_k4_pair():
    cert = switching_certificate(graphs.k4_chiral_signing(), graphs.k1_plus_oriented_triangle())
    assert cert is not None
    d = cert.phases
    expected = np.array([-1j, 1, 1, 1])
    phase = d[0] / expected[0]
    assert_allclose(d, phase * expected, atol=1e-12)
    assert cert.residual <= 1e-12


def test_switching_identity():
    A = graphs.k4_chiral_signing()
    cert = switching_certificate(A, A)
    assert_allclose(cert.D, np.eye(4))


def test_switching_support_mismatch():
    with pytest.raises(SupportMismatch):
        switching_certificate(graphs.complete(3), graphs.path(3))


def test_switching_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        switching_certificate(graphs.complete(3), graphs.complete(4))


def test_switching_none_when_inequivalent():
    # reversing a triangle changes the product of phases around it
    C = graphs.oriented_cycle(3)
    assert switching_certificate(C, C.conj()) is None


@pytest.mark.parametrize("seed", range(6))
def test_switching_recovers_random_diagonal(seed):
    rng = np.random.default_rng(seed)
    A = graphs.even_clique_signing(6)
    D = np.diag(np.exp(2j * np.pi * rng.random(6)))
    B = D.conj().T @ A @ D
    cert = switching_certificate(A, B)
    assert cert is not None
    assert_allclose(cert.D.conj().T @ A @ cert.D, B, atol=1e-9)


def test_switching_pair_mixes_equally():
    A1 = graphs.k4_chiral_signing()
    A2 = graphs.k1_plus_oriented_triangle()
    for t in np.linspace(0.1, 5, 9):
        assert_allclose(mixing_matrix(A1, t).entries, mixing_matrix(A2, t).entries, atol=1e-9)


def test_relabel_moves_vertices():
    A = graphs.path(3)
    B = relabel(A, [2, 1, 0])
    assert_allclose(B, A)
    C = relabel(graphs.claw(3), [1, 0, 2, 3])
    assert_allclose(C[1], [1, 0, 1, 1])


def test_relabel_rejects_non_permutation():
    with pytest.raises(InvalidPartition):
        relabel(np.eye(3), [0, 0, 1])
