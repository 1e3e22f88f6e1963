"""Realignment norms of disjoint-edge graphs E_k (expected 2/sqrt(k)) and of the 3x3 blocks."""

import argparse
import math

from gridlab.criteria import (
    degree_criterion,
    ppt_min_eigenvalue,
    realignment_norm_direct,
    realignment_norm_structure,
)
from gridlab.enumeration import BLOCKS
from gridlab.graph import new_graph


def e_family(k: int):
    return new_graph(2, 2 * k, [((1, 2 * i - 1), (2, 2 * i)) for i in range(1, k + 1)])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-k", type=int, default=12)
    args = ap.parse_args()

    print(f"{'k':>3} {'direct':>14} {'structure':>14} {'2/sqrt(k)':>14} flagged")
    for k in range(1, args.max_k + 1):
        g = e_family(k)
        d, s = realignment_norm_direct(g), realignment_norm_structure(g)
        print(f"{k:>3} {d:14.10f} {s:14.10f} {2 / math.sqrt(k):14.10f} {d > 1 + 1e-9}")

    print()
    print(f"{'block':>5} {'DC':>5} {'min PT eig':>12} {'norm':>14}")
    for name, blk in BLOCKS.items():
        g = blk.graph
        print(f"{name:>5} {degree_criterion(g)!s:>5} {ppt_min_eigenvalue(g):12.2e} {realignment_norm_direct(g):14.10f}")


if __name__ == "__main__":
    main()
