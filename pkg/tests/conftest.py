import itertools

from hypothesis import strategies as st

from gridlab.graph import GridGraph, make_edge


def all_edges(a, b):
    pts = [(i, j) for i in range(1, a + 1) for j in range(1, b + 1)]
    return [make_edge(u, v) for u, v in itertools.combinations(pts, 2)]


def diag_edges(a, b):
    return [e for e in all_edges(a, b) if e[0][0] != e[1][0] and e[0][1] != e[1][1]]


@st.composite
def grid_graphs(draw, max_a=4, max_b=4, min_edges=0, max_edges=8, diagonal_only=False, min_a=1, min_b=1):
    a = draw(st.integers(min_a, max_a))
    b = draw(st.integers(min_b, max_b))
    if min_edges and a * b < 2:
        b = 2
    pool = diag_edges(a, b) if diagonal_only else all_edges(a, b)
    hi = min(max_edges, len(pool))
    lo = min(min_edges, hi)
    edges = draw(st.lists(st.sampled_from(pool), min_size=lo, max_size=hi, unique=True)) if pool else []
    return GridGraph(a, b, frozenset(edges))


@st.composite
def local_isos(draw, a, b):
    from gridlab.isomorphism import LocalIso

    rp = draw(st.permutations(range(1, a + 1)))
    cp = draw(st.permutations(range(1, b + 1)))
    return LocalIso(tuple(rp), tuple(cp))


ACCEPTANCE: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    """Print and keep one pass/fail line for acceptance criterion ``n``."""
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[n] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
