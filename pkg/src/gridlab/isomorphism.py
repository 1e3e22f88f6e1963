"""Local isomorphism: independent permutations of grid rows and grid columns."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch
from .graph import GridGraph, classify_edge, compact, make_edge

# canonical_form refuses compacted graphs whose permutation space exceeds this
CANON_LIMIT = 50_000_000


@dataclass(frozen=True)
class LocalIso:
    """``row_perm[i-1]`` is the image of row ``i``; likewise for columns."""

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]

    def __post_init__(self):
        for p in (self.row_perm, self.col_perm):
            if sorted(p) != list(range(1, len(p) + 1)):
                raise ValueError(f"{p} is not a permutation of 1..{len(p)}")

    @classmethod
    def identity(cls, a: int, b: int) -> "LocalIso":
        return cls(tuple(range(1, a + 1)), tuple(range(1, b + 1)))

    def inverse(self) -> "LocalIso":
        return LocalIso(_invert(self.row_perm), _invert(self.col_perm))

    def then(self, other: "LocalIso") -> "LocalIso":
        """Apply ``self`` first, then ``other``."""
        return LocalIso(
            tuple(other.row_perm[r - 1] for r in self.row_perm),
            tuple(other.col_perm[c - 1] for c in self.col_perm),
        )

    def __str__(self) -> str:
        rows = ",".join(map(str, self.row_perm))
        cols = ",".join(map(str, self.col_perm))
        return f"rows: [{rows}] cols: [{cols}]"


def _invert(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p, 1):
        inv[x - 1] = i
    return tuple(inv)


def apply_local_iso(g: GridGraph, iso: LocalIso) -> GridGraph:
    if (len(iso.row_perm), len(iso.col_perm)) != g.shape:
        raise DimensionMismatch(
            f"permutations of size {len(iso.row_perm)},{len(iso.col_perm)} for a {g.a}x{g.b} graph"
        )
    rp, cp = iso.row_perm, iso.col_perm
    return g.with_edges(
        make_edge((rp[i - 1], cp[j - 1]), (rp[k - 1], cp[l - 1])) for (i, j), (k, l) in g.edges
    )


def random_local_iso(a: int, b: int, rng) -> LocalIso:
    return LocalIso(
        tuple(int(x) + 1 for x in rng.permutation(a)),
        tuple(int(x) + 1 for x in rng.permutation(b)),
    )


# --- invariants and search --------------------------------------------------

def _line_signatures(g: GridGraph, axis: int) -> list[tuple]:
    """Per row (axis 0) or column (axis 1): sorted (degree, in-line edges) of its points."""
    n = g.a if axis == 0 else g.b
    deg: Counter = Counter()
    inline: Counter = Counter()
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
        if u[axis] == v[axis]:
            inline[u] += 1
            inline[v] += 1
    sigs = []
    other = g.b if axis == 0 else g.a
    for x in range(1, n + 1):
        pts = [(x, y) if axis == 0 else (y, x) for y in range(1, other + 1)]
        sigs.append(tuple(sorted((deg[p], inline[p]) for p in pts)))
    return sigs


def _class_profile(g: GridGraph) -> Counter:
    """Edge counts by class, with uphill and downhill merged (permutations swap them)."""
    return Counter("D" if c.is_diagonal else c.value for c in map(classify_edge, g.edges))


def local_isomorphism(g: GridGraph, h: GridGraph) -> LocalIso | None:
    """A witness ``iso`` with ``apply_local_iso(g, iso) == h``, or None."""
    if g.shape != h.shape or g.m != h.m or _class_profile(g) != _class_profile(h):
        return None
    gr, hr = _line_signatures(g, 0), _line_signatures(h, 0)
    gc, hc = _line_signatures(g, 1), _line_signatures(h, 1)
    if sorted(gr) != sorted(hr) or sorted(gc) != sorted(hc):
        return None

    a, b = g.shape
    row_cands = [[r for r in range(1, a + 1) if hr[r - 1] == gr[i - 1]] for i in range(1, a + 1)]
    col_cands = [[c for c in range(1, b + 1) if hc[c - 1] == gc[j - 1]] for j in range(1, b + 1)]
    # edges of g grouped by the later of their two column indices
    by_col: dict[int, list] = {j: [] for j in range(1, b + 1)}
    for e in g.edges:
        by_col[max(e[0][1], e[1][1])].append(e)
    h_edges = h.edges

    def assign_cols(rp: list[int], cp: list[int], used: set, j: int) -> list[int] | None:
        if j > b:
            return cp
        for c in col_cands[j - 1]:
            if c in used:
                continue
            cp.append(c)
            ok = all(
                make_edge((rp[u[0] - 1], cp[u[1] - 1]), (rp[v[0] - 1], cp[v[1] - 1])) in h_edges
                for u, v in by_col[j]
            )
            if ok:
                used.add(c)
                res = assign_cols(rp, cp, used, j + 1)
                if res is not None:
                    return res
                used.discard(c)
            cp.pop()
        return None

    def assign_rows(rp: list[int], used: set, i: int) -> LocalIso | None:
        if i > a:
            cp = assign_cols(rp, [], set(), 1)
            return None if cp is None else LocalIso(tuple(rp), tuple(cp))
        for r in row_cands[i - 1]:
            if r in used:
                continue
            rp.append(r)
            used.add(r)
            res = assign_rows(rp, used, i + 1)
            if res is not None:
                return res
            used.discard(r)
            rp.pop()
        return None

    return assign_rows([], set(), 1)


def are_locally_isomorphic(g: GridGraph, h: GridGraph) -> bool:
    return local_isomorphism(g, h) is not None


# --- canonical form ---------------------------------------------------------

def _all_perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def _canonical_compact(g: GridGraph) -> list[int]:
    """Lexicographically least sorted edge-key list over all row/column permutations."""
    a, b = g.shape
    nv = a * b
    E = np.array([[u[0] - 1, u[1] - 1, v[0] - 1, v[1] - 1] for u, v in g.sorted_edges()], dtype=np.int64)
    if math.factorial(a) * math.factorial(b) > CANON_LIMIT:
        raise ValueError(f"canonical form of a compact {a}x{b} graph is too expensive")
    loop_rows = math.factorial(a) <= math.factorial(b)
    outer = _all_perms(a if loop_rows else b)
    inner = _all_perms(b if loop_rows else a)
    best = None
    for p in outer:
        if loop_rows:
            r1, r2 = p[E[:, 0]], p[E[:, 2]]            # (e,)
            c1, c2 = inner[:, E[:, 1]], inner[:, E[:, 3]]  # (n, e)
            k1 = r1 * b + c1
            k2 = r2 * b + c2
        else:
            c1, c2 = p[E[:, 1]], p[E[:, 3]]
            r1, r2 = inner[:, E[:, 0]], inner[:, E[:, 2]]
            k1 = r1 * b + c1
            k2 = r2 * b + c2
        keys = np.minimum(k1, k2) * nv + np.maximum(k1, k2)
        keys.sort(axis=1)
        idx = np.lexsort(keys.T[::-1])[0]
        cand = keys[idx].tolist()
        if best is None or cand < best:
            best = cand
    return best


def _edges_from_keys(keys: list[int], a: int, b: int, ca: int, cb: int) -> list:
    """Decode edge keys computed on a ``ca x cb`` grid into vertices."""
    nv = ca * cb
    out = []
    for k in keys:
        lo, hi = divmod(k, nv)
        out.append(((lo // cb + 1, lo % cb + 1), (hi // cb + 1, hi % cb + 1)))
    return out


def canonical_form(g: GridGraph) -> GridGraph:
    """Representative of the local-isomorphism class of ``g``.

    Among all row/column relabellings, the one whose sorted edge list is
    lexicographically least.  Empty rows and columns always sort last in
    that representative, so the search runs on the compacted graph.
    """
    if not g.edges:
        return GridGraph(g.a, g.b, frozenset())
    c = compact(g)
    keys = _canonical_compact(c)
    return GridGraph(g.a, g.b, frozenset(_edges_from_keys(keys, g.a, g.b, c.a, c.b)))


def canonical_key(g: GridGraph) -> tuple:
    """Hashable orbit key: shape plus the canonical sorted edge list."""
    return (g.a, g.b, tuple(canonical_form(g).sorted_edges()))


def second_order_iso(g: GridGraph, h: GridGraph) -> bool:
    """Local isomorphism after discarding empty rows/columns and padding to a common grid."""
    cg, ch = compact(g), compact(h)
    if cg.m != ch.m or cg.shape != ch.shape:
        # local isomorphism preserves the number of non-empty rows and columns
        return False
    return local_isomorphism(cg, ch) is not None


def embed_as_1xn(adjacency: Mapping[int, Sequence[int]] | Sequence[Sequence[int]]) -> GridGraph:
    """Place a simple graph on vertices 1..n along a single grid row."""
    if isinstance(adjacency, Mapping):
        items = adjacency.items()
        n = max([0, *adjacency.keys(), *(w for ws in adjacency.values() for w in ws)])
    else:
        items = enumerate(adjacency, 1)
        n = len(adjacency)
    edges = {make_edge((1, v), (1, w)) for v, ws in items for w in ws}
    return GridGraph.from_edges(1, max(n, 1), edges)
