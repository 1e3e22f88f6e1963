"""Brute-force D_k(a,b) against the closed forms, plus P_k and entanglement fractions."""

import argparse

from gridlab.enumeration import (
    EnumerationConfig,
    count_dc_diagonal,
    count_pk,
    diagonal_edge_count,
    entanglement_fraction,
)
from gridlab.errors import BudgetExceeded


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-side", type=int, default=4)
    ap.add_argument("--max-k", type=int, default=4)
    ap.add_argument("--budget", type=int, default=10**6)
    args = ap.parse_args()
    cfg = EnumerationConfig(budget=args.budget)

    print(f"{'a':>2} {'b':>2} {'k':>2} {'D_k':>8} {'formula':>8} {'orbits':>6} {'P_k':>10} {'fraction':>10}")
    for a in range(2, args.max_side + 1):
        for b in range(a, args.max_side + 1):
            for k in range(2, min(args.max_k, diagonal_edge_count(a, b)) + 1):
                try:
                    rep = count_dc_diagonal(a, b, k, cfg)
                    pk = count_pk(a, b, k, cfg).formula_value
                    frac = float(entanglement_fraction(a, b, k, cfg))
                except BudgetExceeded as exc:
                    print(f"{a:>2} {b:>2} {k:>2}  over budget ({exc})")
                    continue
                f = "-" if rep.formula_value is None else rep.formula_value
                print(f"{a:>2} {b:>2} {k:>2} {rep.raw_count:>8} {f!s:>8} {rep.orbit_count:>6} {pk:>10} {frac:10.6f}")


if __name__ == "__main__":
    main()
