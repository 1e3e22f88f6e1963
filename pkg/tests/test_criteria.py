import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import all_edges, grid_graphs, local_isos
from gridlab.criteria import (
    Certificate,
    SeparabilityVerdict,
    Status,
    adjacency_structure_matrix,
    check_certificate,
    column_degree_equality,
    degree_criterion,
    degree_structure_matrix,
    ppt_test,
    realignment_criterion,
    realignment_norm_direct,
    realignment_norm_structure,
    row_subgraph,
    separability_verdict,
    separable_decomposition,
)
from gridlab.enumeration import B2, B3, B4, B5
from gridlab.errors import EmptyGraph, NonDiagonalEdge, OutOfBounds
from gridlab.graph import GridGraph, empty_graph, new_graph
from gridlab.isomorphism import apply_local_iso
from gridlab.linalg import density, realign

SINGLE = new_graph(2, 2, [((1, 1), (2, 2))])
CROSS = new_graph(2, 2, [((1, 1), (2, 2)), ((1, 2), (2, 1))])

# from numpy's SVD on the first run
B4_NORM = 1.1401194830787666


def e_family(k):
    return new_graph(2, 2 * k, [((1, 2 * i - 1), (2, 2 * i)) for i in range(1, k + 1)])


def test_degree_criterion_examples():
    assert degree_criterion(B2.graph)
    assert not degree_criterion(SINGLE)
    assert degree_criterion(B4.graph)
    assert degree_criterion(B5.graph)
    assert degree_criterion(empty_graph(2, 2))


def test_ppt_examples():
    ok, lam = ppt_test(SINGLE)
    assert not ok and lam == pytest.approx(-0.5, abs=1e-12)
    ok, lam = ppt_test(CROSS)
    assert ok and lam >= -1e-12
    ok, lam = ppt_test(B5.graph)
    assert ok and lam >= -1e-9
    with pytest.raises(EmptyGraph):
        ppt_test(empty_graph(2, 2))


def test_ppt_against_numpy_oracle():
    rho = density(SINGLE).matrix
    pt = rho.reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4)
    assert ppt_test(SINGLE)[1] == pytest.approx(np.linalg.eigvalsh(pt)[0], abs=1e-12)


def test_dc_ppt_exhaustive_small():
    """Every graph with at most 5 diagonal edges on 3x4 takes less than a minute; sample 2x3 fully."""
    for k in range(0, 5):
        for edges in itertools.combinations(all_edges(2, 3), k):
            if not edges:
                continue
            g = GridGraph(2, 3, frozenset(edges))
            assert degree_criterion(g) == ppt_test(g)[0]


@settings(max_examples=150, deadline=None)
@given(grid_graphs(max_a=3, max_b=4, min_edges=1, max_edges=5, min_a=2, min_b=2))
def test_dc_iff_ppt(g):
    assert degree_criterion(g) == ppt_test(g)[0]


@given(grid_graphs(max_a=2, min_a=2, max_b=5))
def test_two_row_column_degrees(g):
    assert degree_criterion(g) == column_degree_equality(g)


def test_column_degrees_with_horizontal_edges():
    # a product state whose full-graph column degrees differ
    h = new_graph(2, 2, [((1, 1), (1, 2))])
    assert degree_criterion(h) and ppt_test(h)[0]
    assert column_degree_equality(h)
    assert not column_degree_equality(h, diagonal_part=False)


def test_column_degree_needs_two_rows():
    with pytest.raises(OutOfBounds):
        column_degree_equality(empty_graph(3, 3))


def test_structure_matrices_single_edge():
    assert degree_structure_matrix(SINGLE).tolist() == [[1, 0], [0, 1]]
    assert adjacency_structure_matrix(SINGLE).tolist() == [[1, 0], [0, 1]]
    with pytest.raises(NonDiagonalEdge):
        adjacency_structure_matrix(new_graph(2, 2, [((1, 1), (1, 2))]))


def test_structure_matrix_zero_rows():
    g = new_graph(3, 3, [((1, 1), (2, 2))])
    D = degree_structure_matrix(g)
    assert not D[2].any() and not D[:, 2].any()


def test_row_orthogonal_graph():
    # rows 1 and 3 share no occupied column
    g = new_graph(3, 4, [((1, 1), (2, 2)), ((2, 3), (3, 4))])
    D = degree_structure_matrix(g)
    assert D[0, 2] == 0 and D[2, 0] == 0


def overlap_oracle(g):
    """Count common edges of every ordered pair of row subgraphs by listing them."""
    pairs = [(i, j) for i in range(1, g.a + 1) for j in range(1, g.a + 1) if i != j]
    A = np.zeros((len(pairs), len(pairs)), dtype=int)
    for x, (i, j) in enumerate(pairs):
        ex = [(u, v) for u, v in g.edges if (u[0], v[0]) in ((i, j), (j, i))]
        rx = set()
        for u, v in ex:
            p, q = (u, v) if u[0] == i else (v, u)
            rx.add(((1, p[1]), (2, q[1])))
        for y, (k, l) in enumerate(pairs):
            ey = [(u, v) for u, v in g.edges if (u[0], v[0]) in ((k, l), (l, k))]
            ry = set()
            for u, v in ey:
                p, q = (u, v) if u[0] == k else (v, u)
                ry.add(((1, p[1]), (2, q[1])))
            A[x, y] = len(rx & ry)
    return A


@given(grid_graphs(max_a=4, max_b=4, diagonal_only=True))
def test_adjacency_structure_oracle(g):
    assert (adjacency_structure_matrix(g) == overlap_oracle(g)).all()


def test_row_subgraph():
    assert row_subgraph(SINGLE, 1, 2).sorted_edges() == [((1, 1), (2, 2))]
    assert row_subgraph(SINGLE, 2, 1).sorted_edges() == [((1, 2), (2, 1))]
    assert row_subgraph(empty_graph(3, 3), 1, 2).m == 0
    assert row_subgraph(B2.graph, 1, 3).m == 0
    with pytest.raises(OutOfBounds):
        row_subgraph(SINGLE, 1, 1)
    with pytest.raises(OutOfBounds):
        row_subgraph(SINGLE, 1, 3)


def test_structure_norm_examples():
    assert realignment_norm_structure(SINGLE) == pytest.approx(2.0, abs=1e-12)
    assert realignment_norm_structure(e_family(4)) == pytest.approx(1.0, abs=1e-9)
    assert realignment_norm_structure(e_family(9)) == pytest.approx(2 / 3, abs=1e-9)
    with pytest.raises(EmptyGraph):
        realignment_norm_structure(empty_graph(2, 2))


def test_direct_norm_against_numpy_svd():
    for g in (SINGLE, B4.graph, B5.graph, e_family(4)):
        want = np.linalg.svd(realign(density(g).matrix, g.b), compute_uv=False).sum()
        assert realignment_norm_direct(g) == pytest.approx(want, abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(grid_graphs(max_a=4, max_b=4, min_edges=1, diagonal_only=True, min_a=2, min_b=2))
def test_structure_norm_matches_direct(g):
    assert abs(realignment_norm_structure(g) - realignment_norm_direct(g)) <= 1e-8


def test_realignment_criterion_examples():
    flagged, norm = realignment_criterion(SINGLE, check=True)
    assert flagged and norm == pytest.approx(2.0)
    flagged, norm = realignment_criterion(e_family(4), check=True)
    assert not flagged and norm == pytest.approx(1.0, abs=1e-9)
    flagged, norm = realignment_criterion(B4.graph, check=True)
    assert flagged and norm == pytest.approx(B4_NORM, abs=1e-9)


def test_b5_realignment_norm_is_exactly_one():
    sympy = pytest.importorskip("sympy")
    from gridlab.linalg import laplacian

    L = sympy.Matrix(laplacian(B5.graph).tolist()) / 10
    R = sympy.Matrix(realign(np.array(L.tolist(), dtype=object), 3).tolist())
    exact = sum(sympy.sqrt(lam) * mult for lam, mult in (R * R.T).eigenvals().items())
    assert sympy.nsimplify(sympy.simplify(exact)) == 1
    flagged, norm = realignment_criterion(B5.graph, check=True)
    assert not flagged and norm == pytest.approx(1.0, abs=1e-12)


def test_verdict_examples():
    hv = new_graph(3, 3, [((1, 1), (1, 3)), ((2, 2), (3, 2))])
    v = separability_verdict(hv)
    assert (v.status, v.certificate) == (Status.SEPARABLE, Certificate.HV_ONLY)

    v = separability_verdict(B4.graph)
    assert (v.status, v.certificate) == (Status.BOUND_ENTANGLED_CANDIDATE, Certificate.PPT_PLUS_REALIGNMENT)
    assert v.min_ppt_eig >= -1e-9 and v.realignment_norm > 1 + 1e-9

    v = separability_verdict(SINGLE)
    assert (v.status, v.certificate) == (Status.ENTANGLED, Certificate.DC_VIOLATION)

    v = separability_verdict(B2.graph)
    assert v.certificate is Certificate.TWO_ROW_DC

    with pytest.raises(EmptyGraph):
        separability_verdict(empty_graph(2, 2))


def test_b5_verdict_is_unknown():
    v = separability_verdict(B5.graph)
    assert (v.status, v.certificate) == (Status.UNKNOWN, Certificate.NONE)


def test_union_of_b2_and_b3_is_separable():
    shifted_b2 = new_graph(3, 3, [((2, 1), (3, 2)), ((3, 1), (2, 2))])
    g = GridGraph(3, 3, shifted_b2.edges | B3.graph.edges)
    v = separability_verdict(g)
    assert v.status is Status.SEPARABLE and check_certificate(g, v)

    # corner criss-cross plus tally: no single-shape rule applies
    corner = new_graph(3, 3, [((1, 1), (3, 3)), ((1, 3), (3, 1))])
    g = GridGraph(3, 3, corner.edges | B3.graph.edges)
    v = separability_verdict(g)
    assert v.certificate is Certificate.SEPARABLE_DECOMPOSITION
    assert sorted(p.m for p in v.parts) == [2, 3]
    assert check_certificate(g, v)


def test_decomposition_never_uses_bound_blocks():
    assert separable_decomposition(B4.graph) is None
    assert separable_decomposition(B5.graph) is None


def test_decomposition_budget():
    with pytest.raises(TimeoutError):
        separable_decomposition(B4.graph, node_budget=3)


def test_verdict_json():
    d = separability_verdict(B4.graph).to_dict()
    assert set(d) == {"status", "certificate", "min_ppt_eig", "realignment_norm"}


def test_verdict_invariants():
    with pytest.raises(ValueError):
        SeparabilityVerdict(Status.SEPARABLE, Certificate.DC_VIOLATION)
    with pytest.raises(ValueError):
        SeparabilityVerdict(Status.ENTANGLED, Certificate.HV_ONLY)


@settings(max_examples=60, deadline=None)
@given(grid_graphs(max_a=3, max_b=3, min_edges=1, max_edges=6, min_a=2, min_b=2))
def test_certificates_are_sound(g):
    v = separability_verdict(g)
    assert check_certificate(g, v)


@settings(max_examples=40, deadline=None)
@given(grid_graphs(max_a=3, max_b=3, min_edges=1, max_edges=6, min_a=3, min_b=3), local_isos(3, 3))
def test_verdict_status_invariant_under_local_iso(g, iso):
    v1 = separability_verdict(g)
    v2 = separability_verdict(apply_local_iso(g, iso))
    if v1.decided and v2.decided:
        assert v1.status is v2.status
    assert degree_criterion(g) == degree_criterion(apply_local_iso(g, iso))
