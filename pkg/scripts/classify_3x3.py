"""Classify every degree-criterion 3x3 graph by edge count: raw count, orbits and block shapes."""

import argparse
import time
from collections import Counter

from gridlab.enumeration import EnumerationConfig, building_block_decomposition, enumerate_dc
from gridlab.isomorphism import canonical_key


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-edges", type=int, default=9)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    cfg = EnumerationConfig(jobs=args.jobs)

    print(f"{'k':>2} {'raw':>6} {'orbits':>6} {'undecomposed':>12}  block shapes")
    for k in range(2, args.max_edges + 1):
        t0 = time.perf_counter()
        graphs = enumerate_dc(3, 3, k, cfg=cfg)
        shapes: Counter = Counter()
        missing = 0
        for g in graphs:
            parts = building_block_decomposition(g)
            if parts is None:
                missing += 1
            else:
                shapes["+".join(sorted(b.name for b, _ in parts))] += 1
        orbits = len({canonical_key(g) for g in graphs})
        desc = ", ".join(f"{s}:{n}" for s, n in sorted(shapes.items()))
        print(f"{k:>2} {len(graphs):>6} {orbits:>6} {missing:>12}  {desc}  ({time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    main()
