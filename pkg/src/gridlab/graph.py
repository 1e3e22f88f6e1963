"""Grid-labelled graphs and the purely combinatorial operations on them.

A vertex is a 1-indexed ``(row, col)`` tuple and an edge is a pair of
vertices stored smaller-endpoint-first, so two edges compare equal exactly
when they join the same points.  Vertices are never stored: every point of
the ``a x b`` grid exists implicitly.
"""

from __future__ import annotations

import enum
import json
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, LoopEdge, MalformedInput, NotStratified, OutOfBounds

Vertex = tuple[int, int]
Edge = tuple[Vertex, Vertex]


class EdgeClass(enum.Enum):
    HORIZONTAL = "Horizontal"
    VERTICAL = "Vertical"
    UPHILL = "DiagonalUphill"
    DOWNHILL = "DiagonalDownhill"

    @property
    def is_diagonal(self) -> bool:
        return self in (EdgeClass.UPHILL, EdgeClass.DOWNHILL)


class Axis(enum.Enum):
    ROW = "row"
    COLUMN = "column"


class EdgeOverlapWarning(UserWarning):
    """Union of graphs that were expected to be edge-disjoint."""


def make_edge(u: Sequence[int], v: Sequence[int]) -> Edge:
    u = (int(u[0]), int(u[1]))
    v = (int(v[0]), int(v[1]))
    if u == v:
        raise LoopEdge(f"loop at {u}")
    return (u, v) if u < v else (v, u)


def classify_edge(e: Edge) -> EdgeClass:
    (i, j), (k, l) = e
    if i == k:
        return EdgeClass.HORIZONTAL
    if j == l:
        return EdgeClass.VERTICAL
    # uphill iff sgn(i-k) != sgn(j-l)
    if (i < k) != (j < l):
        return EdgeClass.UPHILL
    return EdgeClass.DOWNHILL


def is_diagonal(e: Edge) -> bool:
    (i, j), (k, l) = e
    return i != k and j != l


def counterpart(e: Edge) -> Edge:
    """Image of an edge under the graph partial transpose: {(i,j),(k,l)} -> {(k,j),(i,l)}."""
    (i, j), (k, l) = e
    return make_edge((k, j), (i, l)) if (i != k and j != l) else e


@dataclass(frozen=True)
class GridGraph:
    """Simple graph on the points of an ``a x b`` grid."""

    a: int
    b: int
    edges: frozenset

    @classmethod
    def from_edges(cls, a: int, b: int, edges: Iterable = ()) -> "GridGraph":
        if a < 1 or b < 1:
            raise OutOfBounds(f"grid dimensions must be positive, got {a}x{b}")
        canon = set()
        for u, v in edges:
            e = make_edge(u, v)
            for (r, c) in e:
                if not (1 <= r <= a and 1 <= c <= b):
                    raise OutOfBounds(f"vertex {(r, c)} outside {a}x{b} grid")
            canon.add(e)
        return cls(a, b, frozenset(canon))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.a, self.b)

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def diagonal_edges(self) -> list[Edge]:
        return [e for e in self.sorted_edges() if is_diagonal(e)]

    def with_edges(self, edges: Iterable[Edge]) -> "GridGraph":
        return GridGraph(self.a, self.b, frozenset(edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"GridGraph({self.a}x{self.b}, {self.sorted_edges()})"


def new_graph(a: int, b: int, edges: Iterable = ()) -> GridGraph:
    return GridGraph.from_edges(a, b, edges)


def empty_graph(a: int, b: int) -> GridGraph:
    return GridGraph.from_edges(a, b, ())


def partial_transpose(g: GridGraph) -> GridGraph:
    """Send every edge {(i,j),(k,l)} to {(k,j),(i,l)}.

    The map is an involution on diagonal edges and fixes horizontal and
    vertical ones, so it is a bijection on edge sets and never merges edges.
    """
    return g.with_edges(counterpart(e) for e in g.edges)


def degree_vector(g: GridGraph) -> dict[Vertex, int]:
    deg = {(i, j): 0 for i in range(1, g.a + 1) for j in range(1, g.b + 1)}
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def hvd_decomposition(g: GridGraph) -> tuple[GridGraph, GridGraph, GridGraph]:
    parts: dict[str, list[Edge]] = {"h": [], "v": [], "d": []}
    for e in g.edges:
        cls = classify_edge(e)
        key = "h" if cls is EdgeClass.HORIZONTAL else "v" if cls is EdgeClass.VERTICAL else "d"
        parts[key].append(e)
    return g.with_edges(parts["h"]), g.with_edges(parts["v"]), g.with_edges(parts["d"])


def is_hv_only(g: GridGraph) -> bool:
    return not any(is_diagonal(e) for e in g.edges)


def is_stratified(g: GridGraph, axis: Axis) -> bool:
    idx = 0 if axis is Axis.ROW else 1
    return all(abs(e[0][idx] - e[1][idx]) == 1 for e in g.edges if is_diagonal(e))


def strata_decomposition(g: GridGraph, axis: Axis = Axis.ROW) -> list[GridGraph]:
    """Split the diagonal edges into strata between consecutive rows (or columns)."""
    idx = 0 if axis is Axis.ROW else 1
    n = g.a if axis is Axis.ROW else g.b
    strata: list[list[Edge]] = [[] for _ in range(max(n - 1, 0))]
    for e in g.edges:
        if not is_diagonal(e):
            continue
        lo, hi = sorted((e[0][idx], e[1][idx]))
        if hi - lo != 1:
            raise NotStratified(f"edge {e} spans {axis.value}s {lo} and {hi}")
        strata[lo - 1].append(e)
    return [g.with_edges(s) for s in strata]


def is_pair_symmetric(g: GridGraph) -> bool:
    return all(counterpart(e) in g.edges for e in g.edges if is_diagonal(e))


def _map_graph(g: GridGraph, a: int, b: int, f) -> GridGraph:
    return GridGraph(a, b, frozenset(make_edge(f(u), f(v)) for u, v in g.edges))


def rotate(g: GridGraph) -> GridGraph:
    """Quarter turn clockwise; the result has shape ``(b, a)``."""
    a = g.a
    return _map_graph(g, g.b, g.a, lambda p: (p[1], a + 1 - p[0]))


def reflect(g: GridGraph) -> GridGraph:
    """Mirror left-right (reverse the column order)."""
    b = g.b
    return _map_graph(g, g.a, g.b, lambda p: (p[0], b + 1 - p[1]))


def transpose_grid(g: GridGraph) -> GridGraph:
    """Swap the roles of rows and columns (reflection in the main diagonal)."""
    return _map_graph(g, g.b, g.a, lambda p: (p[1], p[0]))


def dihedral_images(g: GridGraph) -> list[GridGraph]:
    """The 8 images r^k(g), r^k(s(g)) for k = 0..3; may contain repeats."""
    out = []
    for start in (g, reflect(g)):
        h = start
        for _ in range(4):
            out.append(h)
            h = rotate(h)
    return out


def _check_same_shape(g: GridGraph, h: GridGraph) -> None:
    if g.shape != h.shape:
        raise DimensionMismatch(f"{g.a}x{g.b} vs {h.a}x{h.b}")


def graph_union(g: GridGraph, h: GridGraph) -> GridGraph:
    """Edge-set union.  Shared edges are merged and reported with a warning."""
    _check_same_shape(g, h)
    shared = g.edges & h.edges
    if shared:
        warnings.warn(f"union merged {len(shared)} shared edge(s)", EdgeOverlapWarning, stacklevel=2)
    return g.with_edges(g.edges | h.edges)


def graph_intersection(g: GridGraph, h: GridGraph) -> GridGraph:
    _check_same_shape(g, h)
    return g.with_edges(g.edges & h.edges)


def compact(g: GridGraph) -> GridGraph:
    """Drop every row and column without an edge endpoint and re-index the rest."""
    if not g.edges:
        return GridGraph(1, 1, frozenset())
    rows = sorted({p[0] for e in g.edges for p in e})
    cols = sorted({p[1] for e in g.edges for p in e})
    rmap = {r: n for n, r in enumerate(rows, 1)}
    cmap = {c: n for n, c in enumerate(cols, 1)}
    return _map_graph(g, len(rows), len(cols), lambda p: (rmap[p[0]], cmap[p[1]]))


def pad(g: GridGraph, a: int, b: int) -> GridGraph:
    """Extension of ``g`` to a larger grid (new rows/columns appended at the end)."""
    if a < g.a or b < g.b:
        raise DimensionMismatch(f"cannot pad {g.a}x{g.b} down to {a}x{b}")
    return GridGraph(a, b, g.edges)


def edge_class_counts(g: GridGraph) -> Counter:
    return Counter(classify_edge(e) for e in g.edges)


# --- JSON interchange -------------------------------------------------------

def graph_to_dict(g: GridGraph) -> dict:
    return {
        "rows": g.a,
        "cols": g.b,
        "edges": [[list(u), list(v)] for u, v in g.sorted_edges()],
    }


def graph_from_dict(d: dict) -> GridGraph:
    try:
        a, b, edges = int(d["rows"]), int(d["cols"]), d["edges"]
        pairs = [(tuple(u), tuple(v)) for u, v in edges]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"malformed graph JSON: {exc}") from exc
    for u, v in pairs:
        if len(u) != 2 or len(v) != 2:
            raise MalformedInput(f"malformed endpoint in edge {u}-{v}")
    return GridGraph.from_edges(a, b, pairs)


def dumps_graph(g: GridGraph) -> str:
    return json.dumps(graph_to_dict(g), separators=(",", ":"))


def loads_graph(text: str) -> GridGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"malformed graph JSON: {exc}") from exc
    return graph_from_dict(data)
