"""Contribution matrices and tables, and the Crosses-and-Lassoes solver.

A diagonal edge contributes +1 at its two endpoints and -1 at the two
opposite corners of the rectangle it spans.  In a table each +1 becomes a
down dash and each -1 an up dash, and nothing cancels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, MalformedInput, NonDiagonalEdge
from .graph import Edge, GridGraph, is_diagonal, make_edge


def _require_diagonal(e: Edge) -> None:
    if not is_diagonal(e):
        raise NonDiagonalEdge(f"edge {e} is not diagonal")


def edge_contribution(e: Edge, a: int, b: int) -> np.ndarray:
    _require_diagonal(e)
    (i, j), (k, l) = e
    C = np.zeros((a, b), dtype=np.int64)
    C[i - 1, j - 1] += 1
    C[k - 1, l - 1] += 1
    C[i - 1, l - 1] -= 1
    C[k - 1, j - 1] -= 1
    return C


def graph_contribution(g: GridGraph) -> np.ndarray:
    """Sum of edge contributions; horizontal and vertical edges add nothing."""
    C = np.zeros((g.a, g.b), dtype=np.int64)
    for e in g.edges:
        if is_diagonal(e):
            C += edge_contribution(e, g.a, g.b)
    return C


# --- tables -----------------------------------------------------------------

@dataclass(frozen=True)
class ContributionTable:
    """Per-cell dash counts; ``up[r][c]`` and ``down[r][c]`` are 0-indexed."""

    up: tuple[tuple[int, ...], ...]
    down: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.up) != len(self.down) or any(
            len(u) != len(d) for u, d in zip(self.up, self.down)
        ):
            raise DimensionMismatch("up and down grids differ in shape")
        if len({len(r) for r in self.up}) > 1:
            raise DimensionMismatch("ragged table")
        if any(x < 0 for r in (*self.up, *self.down) for x in r):
            raise ValueError("dash counts must be nonnegative")

    @classmethod
    def from_arrays(cls, up, down) -> "ContributionTable":
        up = np.asarray(up, dtype=np.int64)
        down = np.asarray(down, dtype=np.int64)
        return cls(tuple(map(tuple, up.tolist())), tuple(map(tuple, down.tolist())))

    @classmethod
    def empty(cls, a: int, b: int) -> "ContributionTable":
        z = np.zeros((a, b), dtype=np.int64)
        return cls.from_arrays(z, z)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.up), len(self.up[0]) if self.up else 0)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self.up, dtype=np.int64), np.array(self.down, dtype=np.int64)

    def total(self) -> int:
        return sum(map(sum, self.up)) + sum(map(sum, self.down))

    def crosses(self) -> int:
        """Matched up/down pairs summed over cells."""
        return sum(min(u, d) for ru, rd in zip(self.up, self.down) for u, d in zip(ru, rd))

    def to_text(self) -> str:
        return "".join(
            " ".join(f"{u},{d}" for u, d in zip(ru, rd)) + "\n" for ru, rd in zip(self.up, self.down)
        )

    @classmethod
    def from_text(cls, text: str) -> "ContributionTable":
        up, down = [], []
        for ln in text.splitlines():
            if not ln.strip():
                continue
            ru, rd = [], []
            for cell in ln.split():
                try:
                    u, d = cell.split(",")
                    ru.append(int(u))
                    rd.append(int(d))
                except ValueError as exc:
                    raise MalformedInput(f"bad table cell {cell!r}") from exc
            up.append(tuple(ru))
            down.append(tuple(rd))
        if not up:
            raise MalformedInput("empty table")
        try:
            return cls(tuple(up), tuple(down))
        except (DimensionMismatch, ValueError) as exc:
            raise MalformedInput(str(exc)) from exc


def table_of_graph(g: GridGraph) -> ContributionTable:
    up = np.zeros((g.a, g.b), dtype=np.int64)
    down = np.zeros((g.a, g.b), dtype=np.int64)
    for e in g.edges:
        if not is_diagonal(e):
            continue
        (i, j), (k, l) = e
        down[i - 1, j - 1] += 1
        down[k - 1, l - 1] += 1
        up[i - 1, l - 1] += 1
        up[k - 1, j - 1] += 1
    return ContributionTable.from_arrays(up, down)


def dc_from_table(t: ContributionTable) -> bool:
    return t.up == t.down


# --- game -------------------------------------------------------------------

class MoveKind(enum.Enum):
    CROSS = "CROSS"
    LASSO = "LASSO"


@dataclass(frozen=True, order=True)
class GameMove:
    """Rectangle move with 1-indexed corners, ``r1 < r2`` and ``c1 < c2``."""

    kind: MoveKind
    r1: int
    c1: int
    r2: int
    c2: int

    def __post_init__(self):
        if not (self.r1 < self.r2 and self.c1 < self.c2):
            raise ValueError(f"degenerate rectangle ({self.r1},{self.c1})-({self.r2},{self.c2})")

    def removals(self) -> list[tuple[int, int, str]]:
        """(row, col, 'up'|'down') for the four corner pieces, 1-indexed."""
        tl, tr, br, bl = (self.r1, self.c1), (self.r1, self.c2), (self.r2, self.c2), (self.r2, self.c1)
        first, second = ("down", "up") if self.kind is MoveKind.CROSS else ("up", "down")
        return [(*tl, first), (*tr, second), (*br, first), (*bl, second)]

    def edge(self) -> Edge:
        """Cross is the downhill edge through TL and BR; Lasso the uphill one through TR and BL."""
        if self.kind is MoveKind.CROSS:
            return make_edge((self.r1, self.c1), (self.r2, self.c2))
        return make_edge((self.r1, self.c2), (self.r2, self.c1))

    def __str__(self) -> str:
        return f"{self.kind.value} {self.r1} {self.c1} {self.r2} {self.c2}"


def move_of_edge(e: Edge) -> GameMove:
    _require_diagonal(e)
    (i, j), (k, l) = e  # i < k after canonical ordering
    if j < l:
        return GameMove(MoveKind.CROSS, i, j, k, l)
    return GameMove(MoveKind.LASSO, i, l, k, j)


def apply_moves(t: ContributionTable, moves: Iterable[GameMove]) -> ContributionTable:
    """Replay ``moves``; raises ValueError if any count would go negative."""
    up, down = (x.copy() for x in t.arrays())
    grids = {"up": up, "down": down}
    for mv in moves:
        for r, c, which in mv.removals():
            g = grids[which]
            if not (1 <= r <= g.shape[0] and 1 <= c <= g.shape[1]) or g[r - 1, c - 1] < 1:
                raise ValueError(f"{mv} needs a missing {which} piece at ({r},{c})")
            g[r - 1, c - 1] -= 1
    return ContributionTable.from_arrays(up, down)


def _infeasible(up: list[int], down: list[int], a: int, b: int) -> bool:
    """Necessary conditions: balanced dashes per line, and no line with a single occupied cell."""
    for r in range(a):
        su = sd = occupied = 0
        for c in range(b):
            x = r * b + c
            su += up[x]
            sd += down[x]
            occupied += (up[x] + down[x]) > 0
        if su != sd or occupied == 1:
            return True
    for c in range(b):
        su = sd = occupied = 0
        for r in range(a):
            x = r * b + c
            su += up[x]
            sd += down[x]
            occupied += (up[x] + down[x]) > 0
        if su != sd or occupied == 1:
            return True
    return False


def clearability(t: ContributionTable, distinct: bool = False) -> list[GameMove] | None:
    """A move sequence that empties the board, or None.

    The first occupied cell in row-major order can only be the top-left
    corner of a move, and moves commute, so branching on that cell alone is
    complete.  With ``distinct`` no move may be used twice.
    """
    a, b = t.shape
    up = [x for row in t.up for x in row]
    down = [x for row in t.down for x in row]
    if (sum(up) + sum(down)) % 4:
        return None
    failed: set = set()
    used: list[GameMove] = []

    def corners(r1, c1, r2, c2):
        return r1 * b + c1, r1 * b + c2, r2 * b + c2, r2 * b + c1

    def rec() -> bool:
        pivot = next((x for x in range(a * b) if up[x] or down[x]), None)
        if pivot is None:
            return True
        if _infeasible(up, down, a, b):
            return False
        key = (tuple(up), tuple(down))
        if distinct:
            key += (frozenset(m for m in used if (m.r1 - 1) * b + m.c1 - 1 == pivot),)
        if key in failed:
            return False
        r1, c1 = divmod(pivot, b)
        rects = sorted(
            ((r2, c2) for r2 in range(r1 + 1, a) for c2 in range(c1 + 1, b)),
            key=lambda rc: ((rc[0] - r1) * (rc[1] - c1), rc),
        )
        for kind in (MoveKind.CROSS, MoveKind.LASSO):
            # cross: down at TL/BR, up at TR/BL; lasso the other way round
            first, second = (down, up) if kind is MoveKind.CROSS else (up, down)
            if not first[pivot]:
                continue
            for r2, c2 in rects:
                tl, tr, br, bl = corners(r1, c1, r2, c2)
                if not (second[tr] and first[br] and second[bl]):
                    continue
                mv = GameMove(kind, r1 + 1, c1 + 1, r2 + 1, c2 + 1)
                if distinct and mv in used:
                    continue
                for x, g in ((tl, first), (tr, second), (br, first), (bl, second)):
                    g[x] -= 1
                used.append(mv)
                if rec():
                    return True
                used.pop()
                for x, g in ((tl, first), (tr, second), (br, first), (bl, second)):
                    g[x] += 1
        failed.add(key)
        return False

    return list(used) if rec() else None


def table_validity(t: ContributionTable) -> GridGraph | None:
    """A simple graph whose table is ``t``, or None.

    Uses the solver with repeated moves disallowed, since a repeated move
    would need the same edge twice.
    """
    moves = clearability(t, distinct=True)
    if moves is None:
        return None
    a, b = t.shape
    return GridGraph.from_edges(a, b, [mv.edge() for mv in moves])


# --- subset problems --------------------------------------------------------

def _zero_sum_subset(vectors: Sequence[Sequence[tuple[int, int]]]) -> list[int] | None:
    """Indices of a nonempty subset whose sparse vectors (cell, sign lists) sum to zero."""
    n = len(vectors)
    acc: dict[int, int] = {}
    chosen: list[int] = []
    failed: set = set()

    def state():
        return frozenset((k, v) for k, v in acc.items() if v)

    def rec(idx: int) -> bool:
        if chosen and not any(acc.values()):
            return True
        if idx == n:
            return False
        key = (idx, bool(chosen), state())
        if key in failed:
            return False
        for cell, s in vectors[idx]:
            acc[cell] = acc.get(cell, 0) + s
        chosen.append(idx)
        if rec(idx + 1):
            return True
        chosen.pop()
        for cell, s in vectors[idx]:
            acc[cell] -= s
        if rec(idx + 1):
            return True
        failed.add(key)
        return False

    return list(chosen) if rec(0) else None


def subgraph_dc(g: GridGraph) -> GridGraph | None:
    """A nonempty set of diagonal edges of ``g`` whose contributions cancel, or None."""
    diag = g.diagonal_edges()
    vecs = []
    for (i, j), (k, l) in diag:
        vecs.append([((i, j), 1), ((k, l), 1), ((i, l), -1), ((k, j), -1)])
    idx = _zero_sum_subset(vecs)
    if idx is None:
        return None
    return g.with_edges(diag[x] for x in idx)


@dataclass(frozen=True)
class EdgeState:
    """The pure state of a single edge on an ``a x b`` grid."""

    a: int
    b: int
    u: tuple[int, int]
    v: tuple[int, int]

    @property
    def edge(self) -> Edge:
        return make_edge(self.u, self.v)


def subset_ppt_edge_states(states: Sequence[EdgeState]) -> list[EdgeState] | None:
    """Nonempty subset whose uniform mixture stays positive under partial transpose.

    For Laplacian states this is the degree criterion, so the search is a
    zero-sum subset search; the answer is re-checked numerically.
    Repeated states are collapsed first.
    """
    from .criteria import ppt_test

    if not states:
        return None
    dims = {(s.a, s.b) for s in states}
    if len(dims) > 1:
        raise DimensionMismatch(f"edge states on different grids: {sorted(dims)}")
    (a, b), = dims
    g = GridGraph.from_edges(a, b, [s.edge for s in states])
    sub = subgraph_dc(g)
    if sub is None:
        return None
    ok, lam = ppt_test(sub)
    if not ok:
        raise ArithmeticError(f"zero-sum subset failed the PPT eigenvalue check ({lam})")
    seen, out = set(), []
    for s in states:
        if s.edge in sub.edges and s.edge not in seen:
            seen.add(s.edge)
            out.append(s)
    return out
