#!/usr/bin/env python3
"""Run the built-in claim suite and write the JSON report.

Usage: python scripts/run_verify.py [--out report.json] [--claims id1,id2]
"""

import argparse
import sys

from cechlab.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="report.json")
    ap.add_argument("--claims", default=None)
    args = ap.parse_args()
    argv = ["verify-paper", "--out", args.out]
    if args.claims:
        argv += ["--claims", args.claims]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
