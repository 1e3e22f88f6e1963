"""Command-line front end: ``gridlab <verb> ...``.

Exit codes: 0 decided output, 1 input error, 2 Unknown verdict, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import contribution, criteria, enumeration, isomorphism, linalg
from .errors import BudgetExceeded, GridLabError
from .graph import (
    Axis,
    GridGraph,
    dumps_graph,
    graph_to_dict,
    hvd_decomposition,
    is_diagonal,
    is_stratified,
    loads_graph,
    strata_decomposition,
)

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN, EXIT_BUDGET = 0, 1, 2, 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path: str) -> GridGraph:
    return loads_graph(_read(path))


def _cfg(args) -> enumeration.EnumerationConfig:
    budget = args.budget if args.budget is not None else enumeration.default_budget()
    return enumeration.EnumerationConfig(budget=budget, jobs=args.jobs)


def _emit(obj, fmt: str, text_lines) -> None:
    if fmt == "json":
        print(json.dumps(obj))
    else:
        for ln in text_lines:
            print(ln)


# --- verbs ------------------------------------------------------------------

def cmd_analyze(args) -> int:
    g = _load_graph(args.graph)
    v = criteria.separability_verdict(g)
    d = v.to_dict()
    _emit(d, args.format or "json", [f"{k}: {d[k]}" for k in d])
    return EXIT_UNKNOWN if v.status is criteria.Status.UNKNOWN else EXIT_OK


def cmd_export(args) -> int:
    g = _load_graph(args.graph)
    L = linalg.laplacian(g)
    den = 2 * g.m
    blocks: list[tuple[str, object, int]] = []
    if args.what == "laplacian":
        blocks.append(("laplacian", L, 1))
    elif args.what == "density":
        linalg.density(g)  # raises on an empty graph
        blocks.append(("density", L, den))
    elif args.what == "ptranspose":
        linalg.density(g)
        blocks.append(("ptranspose", linalg.partial_transpose_matrix(L, g.a, g.b), den))
    elif args.what == "realigned":
        linalg.density(g)
        blocks.append(("realigned", linalg.realign(L, g.b), den))
    else:
        blocks.append(("degree_structure", criteria.degree_structure_matrix(g), 1))
        if all(is_diagonal(e) for e in g.edges):
            blocks.append(("adjacency_structure", criteria.adjacency_structure_matrix(g), 1))

    fmt = args.format or "text"
    if fmt == "json":
        out = {}
        for name, M, q in blocks:
            if args.exact:
                out[name] = [[str(Fraction(int(x), q)) for x in row] for row in M]
            else:
                out[name] = (M / q).tolist()
        print(json.dumps(out))
    else:
        for name, M, q in blocks:
            if len(blocks) > 1:
                print(f"# {name}")
            text = linalg.format_matrix_exact(M, q) if args.exact else linalg.format_matrix(M / q)
            sys.stdout.write(text)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    graphs = enumeration.enumerate_dc(
        args.rows,
        args.cols,
        args.edges,
        diagonal_only=args.diagonal_only,
        dedupe=args.dedupe,
        strip=args.strip_crosses,
        cfg=_cfg(args),
    )
    for g in graphs:
        if (args.format or "json") == "json":
            print(dumps_graph(g))
        else:
            print(" ".join(f"{u[0]},{u[1]}-{v[0]},{v[1]}" for u, v in g.sorted_edges()))
    return EXIT_OK


def cmd_count(args) -> int:
    cfg = _cfg(args)
    if args.pk:
        rep = enumeration.count_pk(args.rows, args.cols, args.edges, cfg)
    else:
        rep = enumeration.count_dc_diagonal(args.rows, args.cols, args.edges, cfg)
    d = rep.to_dict()
    _emit(d, args.format or "json", [f"{k}: {d[k]}" for k in d])
    return EXIT_OK


def cmd_iso(args) -> int:
    g, h = _load_graph(args.first), _load_graph(args.second)
    fmt = args.format or "text"
    if args.second_order:
        ok = isomorphism.second_order_iso(g, h)
        _emit({"secondOrder": ok}, fmt, ["true" if ok else "false"])
        return EXIT_OK
    w = isomorphism.local_isomorphism(g, h)
    if w is None:
        _emit({"isomorphic": False}, fmt, ["NOT ISOMORPHIC"])
    else:
        _emit(
            {"isomorphic": True, "rows": list(w.row_perm), "cols": list(w.col_perm)},
            fmt,
            [str(w)],
        )
    return EXIT_OK


def cmd_game(args) -> int:
    t = contribution.ContributionTable.from_text(_read(args.table))
    moves = contribution.clearability(t)
    fmt = args.format or "text"
    if moves is None:
        _emit({"clearable": False, "moves": None}, fmt, ["UNCLEARABLE"])
    else:
        _emit({"clearable": True, "moves": [str(m) for m in moves]}, fmt, [str(m) for m in moves])
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = _load_graph(args.graph)
    h, v, d = hvd_decomposition(g)
    out: dict = {"H": graph_to_dict(h), "V": graph_to_dict(v), "D": graph_to_dict(d)}
    for axis in (Axis.ROW, Axis.COLUMN):
        key = f"strata_{axis.value}"
        out[key] = [graph_to_dict(s) for s in strata_decomposition(d, axis)] if is_stratified(d, axis) else None
    blocks = None
    if g.shape == (3, 3):
        dec = enumeration.building_block_decomposition(d)
        if dec is not None:
            blocks = [{"block": blk.name, "graph": graph_to_dict(p)} for blk, p in dec]
    out["blocks"] = blocks
    fmt = args.format or "json"
    lines = [f"H: {h.sorted_edges()}", f"V: {v.sorted_edges()}", f"D: {d.sorted_edges()}"]
    for axis in ("row", "column"):
        s = out[f"strata_{axis}"]
        lines.append(f"strata ({axis}): " + ("not stratified" if s is None else str([x["edges"] for x in s])))
    lines.append("blocks: " + ("none" if blocks is None else " + ".join(b["block"] for b in blocks)))
    _emit(out, fmt, lines)
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=None)

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--budget", type=int, default=None, help="subset cap (default $GRIDLAB_BUDGET or 1e8)")
    budget.add_argument("--jobs", type=int, default=1)

    p = argparse.ArgumentParser(prog="gridlab", description="Separability tools for grid-labelled graph states.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("analyze", parents=[common], help="separability verdict for a graph")
    s.add_argument("graph")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("export", parents=[common], help="print a matrix built from a graph")
    s.add_argument("graph")
    s.add_argument("--what", choices=("laplacian", "density", "ptranspose", "realigned", "structure"), required=True)
    s.add_argument("--exact", action="store_true", help="rational p/q entries")
    s.set_defaults(func=cmd_export)

    for name, func in (("enumerate", cmd_enumerate), ("count", cmd_count)):
        s = sub.add_parser(name, parents=[common, budget])
        s.add_argument("--rows", type=int, required=True)
        s.add_argument("--cols", type=int, required=True)
        s.add_argument("--edges", type=int, required=True)
        s.set_defaults(func=func)
        if name == "enumerate":
            s.add_argument("--diagonal-only", action="store_true")
            s.add_argument("--dedupe", action="store_true")
            s.add_argument("--strip-crosses", action="store_true")
        else:
            s.add_argument("--pk", action="store_true", help="count all edge classes (P_k)")

    s = sub.add_parser("iso", parents=[common], help="local isomorphism witness")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--second-order", action="store_true")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("game", help="Crosses and Lassoes")
    gsub = s.add_subparsers(dest="game_verb", required=True)
    gs = gsub.add_parser("solve", parents=[common])
    gs.add_argument("table")
    gs.set_defaults(func=cmd_game)

    s = sub.add_parser("decompose", parents=[common], help="HVD, strata and building blocks")
    s.add_argument("graph")
    s.set_defaults(func=cmd_decompose)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"gridlab: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GridLabError, OSError, ValueError) as exc:
        print(f"gridlab: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
