#!/usr/bin/env python3
"""Monte Carlo sanity check of the exact formulas.

Samples Haar-random unitary (and symmetric-unitary) matrices, estimates a
few low-order correlators and transport moments, and compares each estimate
with the exact value.  A check passes when the exact value lies within
five standard errors of the estimate.
"""
import argparse
import sys

from cuecoe.correlator import CorrelatorSpec, MomentSpec, correlator_value, moment
from cuecoe.haar_mc import mc_correlator, mc_moment


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4, help="matrix size (default 4)")
    ap.add_argument("--samples", type=int, default=100000,
                    help="samples per estimate (default 100000)")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    checks = [
        ("<|U_11|^2>  cue", CorrelatorSpec(((1, 1),), ((1, 1),), "cue")),
        ("<|U_12|^4>  cue", CorrelatorSpec(((1, 2), (1, 2)), ((1, 2), (1, 2)), "cue")),
        ("<|W_12|^2>  coe", CorrelatorSpec(((1, 2),), ((1, 2),), "coe")),
        ("<|W_11|^2>  coe", CorrelatorSpec(((1, 1),), ((1, 1),), "coe")),
    ]
    n1 = args.n // 2 or 1
    n2 = args.n - n1
    moments = [
        ("<Tr T>      cue", MomentSpec((1,), n1, n2, "transmission", "cue")),
        ("<Tr T>      coe", MomentSpec((1,), n1, n2, "transmission", "coe")),
        ("<Tr R^2>    cue", MomentSpec((2,), n1, n2, "reflection", "cue")),
    ]

    failures = 0
    for i, (name, spec) in enumerate(checks):
        exact = correlator_value(spec, args.n)
        est = mc_correlator(spec, args.n, args.samples, args.seed + i)
        failures += _report(name, float(exact), est)
    for i, (name, spec) in enumerate(moments):
        exact = moment(spec)
        est = mc_moment(spec, args.samples, args.seed + 100 + i)
        failures += _report(name, float(exact), est)
    return 1 if failures else 0


def _report(name, exact, est) -> int:
    dev = abs(est.mean.real - exact)
    ok = dev <= 5 * est.stderr and abs(est.mean.imag) <= 5 * est.stderr
    print(f"{name}: exact={exact:.6f} mc={est.mean.real:.6f} "
          f"stderr={est.stderr:.2e} ({dev / est.stderr if est.stderr else 0:.1f} se) "
          f"{'OK' if ok else 'FAIL'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
