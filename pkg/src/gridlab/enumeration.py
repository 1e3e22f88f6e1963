"""Counting and exhaustive enumeration of degree-criterion graphs, and 3x3 building blocks."""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import BudgetExceeded, DimensionMismatch, NonDiagonalEdge
from .graph import (
    Edge,
    GridGraph,
    counterpart,
    dihedral_images,
    is_diagonal,
    make_edge,
)
from .isomorphism import LocalIso, apply_local_iso, canonical_key

DEFAULT_BUDGET = 10**8


def default_budget() -> int:
    env = os.environ.get("GRIDLAB_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class EnumerationConfig:
    budget: int = field(default_factory=default_budget)
    jobs: int = 1


# --- closed forms -----------------------------------------------------------

def rook_edge_count(a: int, b: int) -> int:
    return a * b * (a + b) // 2 - a * b


def diagonal_edge_count(a: int, b: int) -> int:
    return 2 * comb(a, 2) * comb(b, 2)


def subfactorial(n: int) -> int:
    """Number of derangements of n elements."""
    if n < 0:
        raise ValueError("subfactorial of a negative number")
    prev, cur = 1, 0  # !0, !1
    if n == 0:
        return 1
    for m in range(2, n + 1):
        prev, cur = cur, (m - 1) * (cur + prev)
    return cur


def dk_formula(a: int, b: int, k: int) -> int | None:
    """Closed form for D_k(a, b) where one is known, else None."""
    if k == 0:
        return 1
    if k == 1:
        return 0
    if k == 2:
        return comb(a, 2) * comb(b, 2)
    if k in (3, 4) and 2 in (a, b):
        n = b if a == 2 else a
        if k == 3:
            return subfactorial(3) * comb(n, 3)
        return 3 * comb(n, 3) + subfactorial(4) * comb(n, 4)
    return None


def pk_formula(a: int, b: int, k: int, dk) -> int:
    """P_k from D_0..D_k, with ``dk(i)`` supplying D_i."""
    r = rook_edge_count(a, b)
    return comb(r, k) + sum(dk(i) * comb(r, k - i) for i in range(2, k + 1))


# --- subset search ----------------------------------------------------------

def grid_diagonal_edges(a: int, b: int) -> list[Edge]:
    pts = [(i, j) for i in range(1, a + 1) for j in range(1, b + 1)]
    return sorted(make_edge(u, v) for u, v in itertools.combinations(pts, 2) if is_diagonal((u, v)))


def grid_hv_edges(a: int, b: int) -> list[Edge]:
    pts = [(i, j) for i in range(1, a + 1) for j in range(1, b + 1)]
    return sorted(make_edge(u, v) for u, v in itertools.combinations(pts, 2) if not is_diagonal((u, v)))


def _edge_vector(e: Edge, b: int) -> tuple[tuple[int, int], ...]:
    (i, j), (k, l) = e
    cell = lambda r, c: (r - 1) * b + (c - 1)  # noqa: E731
    return ((cell(i, j), 1), (cell(k, l), 1), (cell(i, l), -1), (cell(k, j), -1))


def _zero_sum_combinations(a: int, b: int, k: int, first: int | None = None):
    """Index tuples of k-subsets of the grid's diagonal edges with zero total contribution.

    ``first`` pins the smallest index, which is how work is split across processes.
    """
    edges = grid_diagonal_edges(a, b)
    vecs = [_edge_vector(e, b) for e in edges]
    n = len(vecs)
    acc = [0] * (a * b)
    nonzero = 0
    chosen: list[int] = []

    def add(x: int, sign: int) -> None:
        nonlocal nonzero
        for cell, s in vecs[x]:
            before = acc[cell]
            acc[cell] = before + sign * s
            nonzero += (acc[cell] != 0) - (before != 0)

    def rec(start: int):
        slots = k - len(chosen)
        if slots == 0:
            if nonzero == 0:
                yield tuple(chosen)
            return
        # one edge changes at most four cells
        if nonzero > 4 * slots:
            return
        for x in range(start, n - slots + 1):
            add(x, 1)
            chosen.append(x)
            yield from rec(x + 1)
            chosen.pop()
            add(x, -1)

    if k == 0:
        yield ()
        return
    starts = range(n) if first is None else [first]
    for x in starts:
        if x > n - k:
            break
        add(x, 1)
        chosen.append(x)
        yield from rec(x + 1)
        chosen.pop()
        add(x, -1)


def _worker(args) -> list[tuple[int, ...]]:
    a, b, k, first = args
    return list(_zero_sum_combinations(a, b, k, first))


def _dc_index_sets(a: int, b: int, k: int, cfg: EnumerationConfig) -> list[tuple[int, ...]]:
    q = diagonal_edge_count(a, b)
    need = comb(q, k)
    if need > cfg.budget:
        raise BudgetExceeded(need, cfg.budget)
    if cfg.jobs <= 1 or k == 0:
        return list(_zero_sum_combinations(a, b, k))
    tasks = [(a, b, k, x) for x in range(max(q - k + 1, 0))]
    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        parts = list(pool.map(_worker, tasks))
    # partition by first index keeps the lexicographic order of the serial run
    return [s for part in parts for s in part]


def dc_diagonal_graphs(a: int, b: int, k: int, cfg: EnumerationConfig | None = None) -> list[GridGraph]:
    cfg = cfg or EnumerationConfig()
    edges = grid_diagonal_edges(a, b)
    return [GridGraph(a, b, frozenset(edges[x] for x in s)) for s in _dc_index_sets(a, b, k, cfg)]


# --- counting ---------------------------------------------------------------

@dataclass(frozen=True)
class CountReport:
    a: int
    b: int
    k: int
    raw_count: int | None
    orbit_count: int | None
    formula_value: int | None
    agree: bool | None

    def to_dict(self) -> dict:
        return {
            "rows": self.a,
            "cols": self.b,
            "edges": self.k,
            "rawCount": self.raw_count,
            "orbitCount": self.orbit_count,
            "formulaValue": self.formula_value,
            "agree": self.agree,
        }


def _agree(raw, formula) -> bool | None:
    if raw is None or formula is None:
        return None
    return raw == formula


def count_dc_diagonal(a: int, b: int, k: int, cfg: EnumerationConfig | None = None) -> CountReport:
    """Brute-force D_k(a, b), its number of local-isomorphism classes, and the closed form."""
    graphs = dc_diagonal_graphs(a, b, k, cfg)
    orbits = len({canonical_key(g) for g in graphs})
    formula = dk_formula(a, b, k)
    return CountReport(a, b, k, len(graphs), orbits, formula, _agree(len(graphs), formula))


def count_pk(a: int, b: int, k: int, cfg: EnumerationConfig | None = None) -> CountReport:
    """P_k(a, b) by the closed-form sum, cross-checked by direct counting within budget.

    The direct count walks every k-subset of all grid edges and tests the
    contribution balance; horizontal and vertical edges contribute nothing.
    """
    cfg = cfg or EnumerationConfig()
    dks: dict[int, int] = {}

    def dk(i: int) -> int:
        if i not in dks:
            f = dk_formula(a, b, i)
            dks[i] = f if f is not None else count_dc_diagonal(a, b, i, cfg).raw_count
        return dks[i]

    formula = pk_formula(a, b, k, dk)
    total = a * b * (a * b - 1) // 2
    raw = None
    if comb(total, k) <= cfg.budget:
        raw = _direct_pk(a, b, k)
    return CountReport(a, b, k, raw, None, formula, _agree(raw, formula))


def _direct_pk(a: int, b: int, k: int) -> int:
    pts = [(i, j) for i in range(1, a + 1) for j in range(1, b + 1)]
    edges = [make_edge(u, v) for u, v in itertools.combinations(pts, 2)]
    vecs = [_edge_vector(e, b) if is_diagonal(e) else () for e in edges]
    count = 0
    for combo in itertools.combinations(range(len(edges)), k):
        acc = [0] * (a * b)
        for x in combo:
            for cell, s in vecs[x]:
                acc[cell] += s
        count += not any(acc)
    return count


def entanglement_fraction(a: int, b: int, k: int, cfg: EnumerationConfig | None = None) -> Fraction:
    """Share of k-diagonal-edge graphs that fail the degree criterion."""
    total = comb(diagonal_edge_count(a, b), k)
    if total == 0:
        raise ValueError(f"no {k}-edge diagonal graphs on a {a}x{b} grid")
    d = dk_formula(a, b, k)
    if d is None:
        d = count_dc_diagonal(a, b, k, cfg).raw_count
    return 1 - Fraction(d, total)


# --- enumeration ------------------------------------------------------------

def strip_crosses(g: GridGraph) -> GridGraph:
    """Remove every diagonal edge whose counterpart is also present (criss-cross pairs)."""
    return g.with_edges(e for e in g.edges if not (is_diagonal(e) and counterpart(e) in g.edges))


def enumerate_dc(
    a: int,
    b: int,
    k: int,
    diagonal_only: bool = True,
    dedupe: bool = False,
    strip: bool = False,
    cfg: EnumerationConfig | None = None,
) -> list[GridGraph]:
    """All k-edge graphs satisfying the degree criterion, in a deterministic order.

    With ``strip`` the criss-cross pairs are removed first and graphs left
    empty are dropped; with ``dedupe`` one canonical representative is kept
    per local-isomorphism class.
    """
    cfg = cfg or EnumerationConfig()
    if diagonal_only:
        graphs = dc_diagonal_graphs(a, b, k, cfg)
    else:
        hv = grid_hv_edges(a, b)
        graphs = []
        for i in range(k + 1):
            if comb(len(hv), k - i) > cfg.budget:
                raise BudgetExceeded(comb(len(hv), k - i), cfg.budget)
            diag = dc_diagonal_graphs(a, b, i, cfg) if i != 1 else []
            if len(diag) * comb(len(hv), k - i) > cfg.budget:
                raise BudgetExceeded(len(diag) * comb(len(hv), k - i), cfg.budget)
            for d in diag:
                for extra in itertools.combinations(hv, k - i):
                    graphs.append(d.with_edges(d.edges | frozenset(extra)))
    if strip:
        graphs = [s for s in map(strip_crosses, graphs) if s.m]
    if dedupe:
        reps: dict[tuple, GridGraph] = {}
        for g in graphs:
            key = canonical_key(g)
            if key not in reps:
                reps[key] = GridGraph(a, b, frozenset(key[2]))
        return [reps[key] for key in sorted(reps)]
    if strip:
        uniq = {g.edges: g for g in graphs}
        return sorted(uniq.values(), key=lambda g: g.sorted_edges())
    return sorted(graphs, key=lambda g: g.sorted_edges())


# --- building blocks --------------------------------------------------------

@dataclass(frozen=True)
class BuildingBlock:
    name: str
    graph: GridGraph


def _block(name: str, edges) -> BuildingBlock:
    return BuildingBlock(name, GridGraph.from_edges(3, 3, edges))


B2 = _block("B2", [((1, 1), (2, 2)), ((1, 2), (2, 1))])
B3 = _block("B3", [((1, 1), (2, 2)), ((1, 2), (2, 3)), ((2, 1), (1, 3))])
B4 = _block("B4", [((1, 1), (2, 3)), ((2, 1), (3, 3)), ((1, 2), (3, 1)), ((1, 3), (3, 2))])
B5 = _block(
    "B5",
    [((1, 1), (3, 3)), ((1, 2), (2, 1)), ((1, 3), (2, 2)), ((2, 2), (3, 1)), ((2, 3), (3, 2))],
)
BLOCKS = {blk.name: blk for blk in (B2, B3, B4, B5)}

_DIAG_3x3 = grid_diagonal_edges(3, 3)
_BIT = {e: 1 << n for n, e in enumerate(_DIAG_3x3)}


def _mask(edges) -> int:
    m = 0
    for e in edges:
        m |= _BIT[e]
    return m


def block_placements(block: BuildingBlock) -> list[GridGraph]:
    """Every 3x3 image of the block under the dihedral group and row/column permutations."""
    seen: dict[frozenset, GridGraph] = {}
    perms = list(itertools.permutations((1, 2, 3)))
    for img in dihedral_images(block.graph):
        for rp in perms:
            for cp in perms:
                h = apply_local_iso(img, LocalIso(rp, cp))
                seen.setdefault(h.edges, h)
    return sorted(seen.values(), key=lambda g: g.sorted_edges())


_PLACEMENTS: list[tuple[BuildingBlock, int, GridGraph]] | None = None


def _placements() -> list[tuple[BuildingBlock, int, GridGraph]]:
    global _PLACEMENTS
    if _PLACEMENTS is None:
        out = []
        for blk in (B5, B4, B3, B2):  # larger blocks are tried first
            out += [(blk, _mask(p.edges), p) for p in block_placements(blk)]
        _PLACEMENTS = out
    return _PLACEMENTS


def building_block_decomposition(g: GridGraph) -> list[tuple[BuildingBlock, GridGraph]] | None:
    """Partition the edges of a diagonal-only 3x3 graph into building-block placements."""
    if g.shape != (3, 3):
        raise DimensionMismatch(f"building blocks live on 3x3 grids, got {g.a}x{g.b}")
    bad = [e for e in g.edges if not is_diagonal(e)]
    if bad:
        raise NonDiagonalEdge(f"edge {bad[0]} is not diagonal")
    if not g.edges:
        return []
    placements = _placements()
    failed: set[int] = set()

    def solve(remaining: int) -> list | None:
        if remaining == 0:
            return []
        if remaining in failed:
            return None
        low = remaining & -remaining
        for blk, m, p in placements:
            if m & low and m & remaining == m:
                rest = solve(remaining & ~m)
                if rest is not None:
                    return [(blk, p), *rest]
        failed.add(remaining)
        return None

    return solve(_mask(g.edges))
