#!/usr/bin/env python3
"""Print the generic-moduli dimension grid over (k, j).

Usage: python scripts/moduli_grid.py [--family W] [--kmax 3] [--jmax 6]
"""

import argparse

from cechlab.moduli import generic_moduli_dim
from cechlab.spaces import make_standard_space


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=["W", "Z"], default="W")
    ap.add_argument("--kmax", type=int, default=3)
    ap.add_argument("--jmax", type=int, default=6)
    args = ap.parse_args()

    print(f"{'space':8s} {'j':>2s} {'h1(<=1)':>8s} {'h1-2j':>6s} {'formula':>8s} ok")
    for k in range(1, args.kmax + 1):
        space = make_standard_space(args.family, k)
        for j in range(1, args.jmax + 1):
            if args.family == "Z" and 2 * j - k - 2 < 0:
                continue
            rep = generic_moduli_dim(space, j)
            mark = "yes" if rep.agrees else "NO"
            if rep.no_generic_part:
                mark += " (no generic part)"
            print(
                f"{rep.space_name:8s} {j:2d} {rep.first_neighborhood_dim:8d} "
                f"{rep.quotient_convention_dim:6d} {rep.formula_value:8d} {mark}"
            )


if __name__ == "__main__":
    main()
