#!/usr/bin/env python3
"""Scan H1 dimension tables of a line bundle over growing fiber windows.

Prints, per fiber-degree cutoff, the number of basis classes per total fiber
degree; handy for spotting the arithmetic growth patterns of the
infinite-dimensional examples.

Usage: python scripts/h1_window_scan.py W2 -4 --max-fiber 8
"""

import argparse

from cechlab.bundles import line_bundle, tangent_bundle
from cechlab.cech import DegreeBox, h1
from cechlab.cli import parse_space


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("space", help="Z<k>, W<k>, optionally @t1=...")
    ap.add_argument("degree", type=int, nargs="?", default=None,
                    help="line bundle degree; omit for the tangent bundle")
    ap.add_argument("--max-fiber", type=int, default=8)
    ap.add_argument("--l-lo", type=int, default=-14)
    args = ap.parse_args()

    space = parse_space(args.space)
    if args.degree is None:
        bundle = tangent_bundle(space)
    else:
        bundle = line_bundle(space, args.degree)
    print(f"space {space}")
    print(f"bundle {bundle.name}")
    for fmax in range(0, args.max_fiber + 1):
        box = DegreeBox.make(args.l_lo, 2, fmax, space.fiber_count)
        res = h1(bundle, box)
        cert = type(res.certification).__name__
        dims = " ".join(
            f"{d}:{res.dims_by_fiber_degree[d]}"
            for d in sorted(res.dims_by_fiber_degree)
        )
        total = res.dim
        print(f"fiberMax {fmax:2d}  dim {total:4d}  [{cert}]  {dims}")
        if res.pattern:
            print(f"             pattern: {res.pattern}")


if __name__ == "__main__":
    main()
