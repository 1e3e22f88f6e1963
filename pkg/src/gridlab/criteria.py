"""Entanglement criteria for grid-graph states and the combined verdict engine."""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyGraph, NonDiagonalEdge, OutOfBounds
from .graph import (
    Axis,
    GridGraph,
    compact,
    counterpart,
    degree_vector,
    hvd_decomposition,
    is_diagonal,
    is_hv_only,
    is_pair_symmetric,
    is_stratified,
    make_edge,
)
from .isomorphism import second_order_iso
from .linalg import (
    PSD_TOL,
    density,
    ky_fan_norm,
    laplacian,
    min_eigenvalue,
    partial_transpose_matrix,
    realign,
    sym_eigenvalues,
)

REALIGN_MARGIN = 1e-9
STRUCTURE_AGREEMENT = 1e-8
MAX_PART_EDGES = 6
DECOMP_NODE_BUDGET = 200_000


# --- degree criterion and PPT ----------------------------------------------

def degree_criterion(g: GridGraph) -> bool:
    """Exact test: every vertex keeps its degree under the graph partial transpose.

    Degrees after the transpose are tallied from the image of each edge
    separately, so coinciding images would still be counted twice.
    """
    before = Counter()
    after = Counter()
    for e in g.edges:
        for p in e:
            before[p] += 1
        for p in counterpart(e):
            after[p] += 1
    return before == after


def column_degree_equality(g: GridGraph, diagonal_part: bool = True) -> bool:
    """For a two-row graph: d((1,j)) == d((2,j)) for every column j.

    Degrees are taken in the diagonal part by default.  Counting horizontal
    edges too breaks the equivalence with separability: a lone horizontal
    edge is a product state yet has unequal column degrees.
    """
    if g.a != 2:
        raise OutOfBounds(f"column-degree test needs a 2-row graph, got {g.a} rows")
    if diagonal_part:
        g = hvd_decomposition(g)[2]
    d = degree_vector(g)
    return all(d[(1, j)] == d[(2, j)] for j in range(1, g.b + 1))


def ppt_min_eigenvalue(g: GridGraph) -> float:
    if g.m == 0:
        raise EmptyGraph("PPT test needs at least one edge")
    L = laplacian(g)
    return min_eigenvalue(partial_transpose_matrix(L, g.a, g.b)) / (2 * g.m)


def ppt_test(g: GridGraph) -> tuple[bool, float]:
    lam = ppt_min_eigenvalue(g)
    return lam >= -PSD_TOL, lam


# --- structure matrices and realignment -------------------------------------

def row_subgraph(g: GridGraph, i: int, j: int) -> GridGraph:
    """Edges between rows ``i`` and ``j``, relabelled onto rows 1 and 2."""
    if not (1 <= i <= g.a and 1 <= j <= g.a) or i == j:
        raise OutOfBounds(f"bad row pair ({i}, {j}) for {g.a} rows")
    rows = {i: 1, j: 2}
    out = []
    for u, v in g.edges:
        if {u[0], v[0]} == {i, j}:
            out.append(make_edge((rows[u[0]], u[1]), (rows[v[0]], v[1])))
    return GridGraph(2, g.b, frozenset(out))


def ordered_row_pairs(a: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, a + 1) for j in range(1, a + 1) if i != j]


def _degree_rows(g: GridGraph) -> np.ndarray:
    d = degree_vector(g)
    return np.array([[d[(i, p)] for p in range(1, g.b + 1)] for i in range(1, g.a + 1)], dtype=np.int64)


def degree_structure_matrix(g: GridGraph) -> np.ndarray:
    D = _degree_rows(g)
    return D @ D.T


def _require_diagonal(g: GridGraph) -> None:
    bad = [e for e in g.edges if not is_diagonal(e)]
    if bad:
        raise NonDiagonalEdge(f"edge {bad[0]} is not diagonal")


def _row_pair_incidence(g: GridGraph) -> np.ndarray:
    """0/1 matrix: ordered row pair x edge of a two-row graph, 1 if that row subgraph has it."""
    _require_diagonal(g)
    subs = [row_subgraph(g, i, j).edges for i, j in ordered_row_pairs(g.a)]
    cols = sorted(frozenset().union(*subs)) if subs else []
    index = {e: n for n, e in enumerate(cols)}
    B = np.zeros((len(subs), len(cols)), dtype=np.int64)
    for x, sub in enumerate(subs):
        for e in sub:
            B[x, index[e]] = 1
    return B


def adjacency_structure_matrix(g: GridGraph) -> np.ndarray:
    B = _row_pair_incidence(g)
    return B @ B.T


def realignment_norm_structure(g: GridGraph) -> float:
    """Realignment norm of a diagonal-only graph from its two structure matrices.

    Both matrices are Gram matrices (of the row-pair incidence and of the
    per-row degree vectors), so the square roots of their eigenvalues are
    taken as singular values of those factors.
    """
    _require_diagonal(g)
    if g.m == 0:
        raise EmptyGraph("realignment norm needs at least one edge")
    B = _row_pair_incidence(g)
    D = _degree_rows(g)
    return (ky_fan_norm(B) + ky_fan_norm(D)) / (2 * g.m)


def structure_spectra(g: GridGraph) -> tuple[list[float], list[float]]:
    """Eigenvalues of the adjacency and degree structure matrices."""
    return sym_eigenvalues(adjacency_structure_matrix(g)), sym_eigenvalues(degree_structure_matrix(g))


def realignment_norm_direct(g: GridGraph) -> float:
    rho = density(g)
    return ky_fan_norm(realign(rho.matrix, g.b))


def realignment_criterion(g: GridGraph, check: bool = False) -> tuple[bool, float]:
    """``(entangled, norm)``; entangled iff norm > 1 + 1e-9.

    Diagonal-only graphs use the structure-matrix route; ``check`` also runs
    the direct route and raises if the two disagree.
    """
    if g.m == 0:
        raise EmptyGraph("realignment criterion needs at least one edge")
    if all(is_diagonal(e) for e in g.edges):
        norm = realignment_norm_structure(g)
        if check:
            direct = realignment_norm_direct(g)
            if abs(direct - norm) > STRUCTURE_AGREEMENT:
                raise ArithmeticError(f"structure norm {norm} vs direct {direct}")
    else:
        norm = realignment_norm_direct(g)
    return norm > 1 + REALIGN_MARGIN, norm


# --- verdict ----------------------------------------------------------------

class Status(enum.Enum):
    SEPARABLE = "Separable"
    ENTANGLED = "Entangled"
    BOUND_ENTANGLED_CANDIDATE = "BoundEntangledCandidate"
    UNKNOWN = "Unknown"


class Certificate(enum.Enum):
    HV_ONLY = "HVOnly"
    TWO_ROW_DC = "TwoRowDC"
    STRATIFIED_DC = "StratifiedDC"
    PAIR_SYMMETRIC = "PairSymmetric"
    SEPARABLE_DECOMPOSITION = "SeparableDecomposition"
    DC_VIOLATION = "DCViolation"
    REALIGNMENT_VIOLATION = "RealignmentViolation"
    PPT_PLUS_REALIGNMENT = "PPTPlusRealignment"
    NONE = "None"


SEPARABLE_CERTS = {
    Certificate.HV_ONLY,
    Certificate.TWO_ROW_DC,
    Certificate.STRATIFIED_DC,
    Certificate.PAIR_SYMMETRIC,
    Certificate.SEPARABLE_DECOMPOSITION,
}


@dataclass(frozen=True)
class SeparabilityVerdict:
    status: Status
    certificate: Certificate
    min_ppt_eig: float | None = None
    realignment_norm: float | None = None
    # diagonal-edge parts backing a SeparableDecomposition certificate
    parts: tuple[GridGraph, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.status is Status.SEPARABLE and self.certificate not in SEPARABLE_CERTS:
            raise ValueError(f"Separable verdict with certificate {self.certificate.value}")
        if self.status is Status.ENTANGLED and self.certificate not in (
            Certificate.DC_VIOLATION,
            Certificate.REALIGNMENT_VIOLATION,
        ):
            raise ValueError(f"Entangled verdict with certificate {self.certificate.value}")

    @property
    def decided(self) -> bool:
        return self.status is not Status.UNKNOWN

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "certificate": self.certificate.value,
            "min_ppt_eig": self.min_ppt_eig,
            "realignment_norm": self.realignment_norm,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _two_row_shape(g: GridGraph) -> bool:
    c = compact(g)
    return c.a <= 2 or c.b <= 2


def _is_stratified_any(g: GridGraph) -> bool:
    return is_stratified(g, Axis.ROW) or is_stratified(g, Axis.COLUMN)


_BLOCK_B2 = GridGraph.from_edges(3, 3, [((1, 1), (2, 2)), ((1, 2), (2, 1))])
_BLOCK_B3 = GridGraph.from_edges(3, 3, [((1, 1), (2, 2)), ((1, 2), (2, 3)), ((2, 1), (1, 3))])


def certify_part(part: GridGraph) -> Certificate | None:
    """Separability certificate for a DC diagonal-only part, or None.

    Never accepts the cross-hatch or skew-mesh patterns: whether unions
    involving them are separable is unresolved.
    """
    if not degree_criterion(part):
        return None
    if _two_row_shape(part):
        return Certificate.TWO_ROW_DC
    if _is_stratified_any(part):
        return Certificate.STRATIFIED_DC
    if is_pair_symmetric(part):
        return Certificate.PAIR_SYMMETRIC
    if part.m in (2, 3) and any(second_order_iso(part, blk) for blk in (_BLOCK_B2, _BLOCK_B3)):
        return Certificate.TWO_ROW_DC
    return None


def _contribution(e) -> list[tuple[tuple[int, int], int]]:
    (i, j), (k, l) = e
    return [((i, j), 1), ((k, l), 1), ((i, l), -1), ((k, j), -1)]


class _Budget(Exception):
    pass


def separable_decomposition(
    g: GridGraph,
    max_part: int = MAX_PART_EDGES,
    node_budget: int = DECOMP_NODE_BUDGET,
) -> list[GridGraph] | None:
    """Partition the diagonal edges into certified parts of at most ``max_part`` edges.

    Returns None when no partition is found, and raises ``TimeoutError``
    when the node budget runs out first.
    """
    diag = tuple(sorted(e for e in g.edges if is_diagonal(e)))
    contrib = {e: _contribution(e) for e in diag}
    cert_memo: dict[frozenset, bool] = {}
    failed: set[frozenset] = set()
    nodes = 0

    def certified(edges: frozenset) -> bool:
        if edges not in cert_memo:
            cert_memo[edges] = certify_part(GridGraph(g.a, g.b, edges)) is not None
        return cert_memo[edges]

    def zero_sum_parts(first, rest):
        """Zero-sum subsets containing ``first`` drawn from ``rest``, up to max_part edges."""
        acc: Counter = Counter()
        for cell, s in contrib[first]:
            acc[cell] += s
        chosen = [first]

        def rec(start: int):
            nonlocal nodes
            nodes += 1
            if nodes > node_budget:
                raise _Budget
            nonzero = sum(1 for v in acc.values() if v)
            if nonzero == 0 and len(chosen) >= 2:
                yield frozenset(chosen)
            slots = max_part - len(chosen)
            # each added edge can cancel at most four nonzero cells
            if slots == 0 or nonzero > 4 * slots:
                return
            for idx in range(start, len(rest)):
                e = rest[idx]
                for cell, s in contrib[e]:
                    acc[cell] += s
                chosen.append(e)
                yield from rec(idx + 1)
                chosen.pop()
                for cell, s in contrib[e]:
                    acc[cell] -= s

        yield from rec(0)

    def solve(remaining: tuple) -> list[frozenset] | None:
        if not remaining:
            return []
        key = frozenset(remaining)
        if key in failed:
            return None
        first, rest = remaining[0], remaining[1:]
        for part in zero_sum_parts(first, rest):
            if not certified(part):
                continue
            sub = solve(tuple(e for e in rest if e not in part))
            if sub is not None:
                return [part, *sub]
        failed.add(key)
        return None

    try:
        parts = solve(diag)
    except _Budget:
        raise TimeoutError("separable decomposition search exceeded its node budget") from None
    if parts is None:
        return None
    return [GridGraph(g.a, g.b, p) for p in parts]


def separability_verdict(g: GridGraph, node_budget: int = DECOMP_NODE_BUDGET) -> SeparabilityVerdict:
    if g.m == 0:
        raise EmptyGraph("verdict needs at least one edge")
    _, min_eig = ppt_test(g)
    flagged, norm = realignment_criterion(g)

    def verdict(status, cert, parts=()):
        return SeparabilityVerdict(status, cert, min_eig, norm, tuple(parts))

    if not degree_criterion(g):
        return verdict(Status.ENTANGLED, Certificate.DC_VIOLATION)
    if is_hv_only(g):
        return verdict(Status.SEPARABLE, Certificate.HV_ONLY)
    _, _, diag = hvd_decomposition(g)
    # horizontal/vertical edges are product states, so only the diagonal part matters below
    if _two_row_shape(diag):
        return verdict(Status.SEPARABLE, Certificate.TWO_ROW_DC)
    if _is_stratified_any(g):
        return verdict(Status.SEPARABLE, Certificate.STRATIFIED_DC)
    if is_pair_symmetric(g):
        return verdict(Status.SEPARABLE, Certificate.PAIR_SYMMETRIC)
    try:
        parts = separable_decomposition(diag, node_budget=node_budget)
    except TimeoutError:
        parts = None
    if parts is not None:
        return verdict(Status.SEPARABLE, Certificate.SEPARABLE_DECOMPOSITION, parts)
    if flagged:
        return verdict(Status.BOUND_ENTANGLED_CANDIDATE, Certificate.PPT_PLUS_REALIGNMENT)
    return verdict(Status.UNKNOWN, Certificate.NONE)


def check_certificate(g: GridGraph, v: SeparabilityVerdict) -> bool:
    """Re-derive the precondition of the certificate named in ``v``."""
    c = v.certificate
    _, _, diag = hvd_decomposition(g)
    if c is Certificate.DC_VIOLATION:
        return not degree_criterion(g)
    if c is Certificate.HV_ONLY:
        return is_hv_only(g)
    if c is Certificate.TWO_ROW_DC:
        return degree_criterion(g) and _two_row_shape(diag)
    if c is Certificate.STRATIFIED_DC:
        return degree_criterion(g) and _is_stratified_any(g)
    if c is Certificate.PAIR_SYMMETRIC:
        return is_pair_symmetric(g)
    if c is Certificate.SEPARABLE_DECOMPOSITION:
        if not v.parts:
            return False
        union = frozenset().union(*(p.edges for p in v.parts))
        sizes = sum(p.m for p in v.parts)
        return (
            union == diag.edges
            and sizes == diag.m
            and all(certify_part(p) is not None for p in v.parts)
        )
    if c is Certificate.PPT_PLUS_REALIGNMENT:
        ok, _ = ppt_test(g)
        return degree_criterion(g) and ok and realignment_criterion(g)[0]
    if c is Certificate.REALIGNMENT_VIOLATION:
        return realignment_criterion(g)[0]
    return c is Certificate.NONE
