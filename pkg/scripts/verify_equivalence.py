#!/usr/bin/env python3
"""Cross-check the exact pipelines against each other.

For every cycle type up to a chosen size this compares the recursion-based
class coefficients, their Laurent expansions, the factorization-counting
series, and (optionally) the signed ribbon-diagram sums, then reports a
single OK/FAIL line per check.  Exit status is 0 iff everything agrees.
"""
import argparse
import sys

from cuecoe.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-t", type=int, default=4,
                    help="largest permutation size to sweep (default 4)")
    ap.add_argument("--order", type=int, default=4,
                    help="extra expansion orders beyond t (default 4)")
    ap.add_argument("--with-diagrams", action="store_true",
                    help="also cross-check signed ribbon-diagram sums")
    args = ap.parse_args()
    argv = ["verify", "--max-t", str(args.max_t), "--max-order",
            str(args.order), "--format", "text"]
    if args.with_diagrams:
        argv.append("--with-diagrams")
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
