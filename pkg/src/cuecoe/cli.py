"""Command-line interface: exact class coefficients, factorizations, series
comparisons, diagram enumeration, correlators, transport moments, Monte
Carlo estimates, DOT rendering, and an end-to-end `verify` command.

All commands print UTF-8 JSON to stdout (or plain text with --format text),
diagnostics go to stderr.  Exit codes: 0 success, 1 computation error or
verification mismatch, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .correlator import (COE, CUE, CorrelatorSpec, MomentSpec, correlator,
                         correlator_value, moment, moment_bruteforce)
from .factorizations import (canonical_orthogonal_target,
                             canonical_unitary_target, count_monotone,
                             count_palindromic, delta_series_o,
                             delta_series_u, enumerate_monotone,
                             enumerate_palindromic)
from .haar_mc import mc_correlator, mc_moment
from .perms import Permutation
from .ratfun import LaurentSeries, RationalFunction, laurent_expand
from .ribbon import ORTHOGONAL, UNITARY, enumerate_diagrams, signed_sum, to_dot
from .weingarten import partitions, v_coe, v_cue


# -- serialization helpers -------------------------------------------------


def _frac(x: Fraction) -> str:
    return str(x)


def _ratfun(f: RationalFunction) -> dict:
    return {"numerator": str(f.num), "denominator": str(f.den)}


def _series(s: LaurentSeries) -> list[dict]:
    return [{"power": k, "coefficient": _frac(c)} for k, c in s.terms()]


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        json.dump(payload, sys.stdout, indent=2, default=str)
        sys.stdout.write("\n")
    else:
        _emit_text(payload, indent=0)


def _emit_text(obj, indent: int) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)):
                sys.stdout.write(f"{pad}{k}:\n")
                _emit_text(v, indent + 1)
            else:
                sys.stdout.write(f"{pad}{k}: {v}\n")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                _emit_text(v, indent)
                sys.stdout.write("\n" if indent == 0 else "")
            else:
                sys.stdout.write(f"{pad}- {v}\n")
    else:
        sys.stdout.write(f"{pad}{obj}\n")


# -- argument parsing -------------------------------------------------------


def _partition(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad partition {text!r}") from None
    if not parts or any(p < 1 for p in parts):
        raise argparse.ArgumentTypeError(f"bad partition {text!r}")
    return parts


def _pairs(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for grp in text.split(";"):
        grp = grp.strip()
        if not grp:
            continue
        bits = grp.split(",")
        if len(bits) != 2:
            raise argparse.ArgumentTypeError(f"bad index pair {grp!r}")
        out.append((int(bits[0]), int(bits[1])))
    return tuple(out)


def _symmetry(text: str) -> str:
    key = text.lower()
    if key in ("u", "unitary", "cue"):
        return UNITARY
    if key in ("o", "orthogonal", "coe"):
        return ORTHOGONAL
    raise argparse.ArgumentTypeError(f"unknown symmetry {text!r}")


def _ensemble(text: str) -> str:
    key = text.lower()
    if key in ("cue", "u"):
        return CUE
    if key in ("coe", "o"):
        return COE
    raise argparse.ArgumentTypeError(f"unknown ensemble {text!r}")


# -- subcommands ------------------------------------------------------------


def _cmd_weingarten(args) -> dict:
    f = v_cue(args.partition) if args.ensemble == CUE else v_coe(args.partition)
    out = {"ensemble": args.ensemble,
           "partition": list(args.partition),
           **_ratfun(f)}
    if args.n is not None:
        out["value_at_n"] = _frac(f.evaluate(args.n))
    return out


def _cmd_factorize(args) -> dict:
    if args.symmetry == UNITARY:
        tau = canonical_unitary_target(args.partition)
        facts = enumerate_monotone(tau, args.v)
        count = count_monotone(args.partition, args.v)
    else:
        tau = canonical_orthogonal_target(args.partition)
        facts = enumerate_palindromic(tau, args.v)
        count = count_palindromic(args.partition, args.v)
    return {"symmetry": args.symmetry,
            "partition": list(args.partition),
            "target": tau.cycle_string(),
            "v": args.v,
            "count": count,
            "enumerated": len(facts),
            "agree": count == len(facts),
            "factorizations": [str(f) for f in facts]}


def _cmd_series(args) -> dict:
    if args.symmetry == UNITARY:
        series = delta_series_u(args.partition, args.order)
        wg = laurent_expand(v_cue(args.partition), args.order)
    else:
        series = delta_series_o(args.partition, args.order)
        wg = laurent_expand(v_coe(args.partition), args.order)
    return {"symmetry": args.symmetry,
            "partition": list(args.partition),
            "order": args.order,
            "factorization_series": _series(series),
            "weingarten_series": _series(wg),
            "equal": series == wg}


def _parse_target(args):
    if args.target is not None:
        tau = Permutation.parse(args.target)
        if args.symmetry == ORTHOGONAL and not tau.barred:
            raise ValueError("orthogonal targets need barred labels, e.g. (1 -2)")
        return tau
    if args.partition is None:
        raise ValueError("need --target or --partition")
    if args.symmetry == UNITARY:
        return canonical_unitary_target(args.partition)
    return canonical_orthogonal_target(args.partition)


def _cmd_diagrams(args) -> dict:
    tau = _parse_target(args)
    diags = enumerate_diagrams(tau, args.max_order, args.symmetry, force=args.force)
    by_shape: dict[tuple[int, int], int] = {}
    for d in diags:
        c = d.contribution()
        by_shape[(c.v, c.e)] = by_shape.get((c.v, c.e), 0) + 1
    s = signed_sum(tau, args.max_order, args.symmetry, force=args.force)
    return {"symmetry": args.symmetry,
            "target": tau.cycle_string(),
            "max_order": args.max_order,
            "total": len(diags),
            "counts": [{"v": v, "e": e, "order": e - v, "diagrams": n}
                       for (v, e), n in sorted(by_shape.items())],
            "signed_sum": _series(s)}


def _cmd_correlator(args) -> dict:
    spec = CorrelatorSpec(args.z, args.zstar, args.ensemble)
    f = correlator(spec)
    out = {"ensemble": args.ensemble,
           "z": [list(p) for p in args.z],
           "zstar": [list(p) for p in args.zstar],
           **_ratfun(f)}
    if args.n is not None:
        out["value_at_n"] = _frac(correlator_value(spec, args.n))
    return out


def _cmd_moment(args) -> dict:
    spec = MomentSpec(args.traces, args.n1, args.n2, args.block, args.ensemble)
    m = moment(spec)
    out = {"ensemble": args.ensemble,
           "traces": list(args.traces),
           "n1": args.n1, "n2": args.n2,
           "block": args.block,
           "moment": _frac(m)}
    if args.oracle:
        o = moment_bruteforce(spec)
        out["oracle"] = _frac(o)
        out["agree"] = m == o
    return out


def _cmd_mc(args) -> dict:
    if args.correlator is not None:
        spec = CorrelatorSpec(args.correlator, args.zstar or args.correlator,
                              args.ensemble)
        est = mc_correlator(spec, args.n, args.samples, args.seed)
    elif args.moment is not None:
        spec = MomentSpec(args.moment, args.n1, args.n2, args.block, args.ensemble)
        est = mc_moment(spec, args.samples, args.seed)
    else:
        raise ValueError("need --correlator or --moment")
    return {"ensemble": args.ensemble,
            "mean_re": est.mean.real,
            "mean_im": est.mean.imag,
            "stderr": est.stderr,
            "samples": est.samples,
            "seed": est.seed}


def _cmd_render(args) -> dict:
    tau = _parse_target(args)
    diags = enumerate_diagrams(tau, args.max_order, args.symmetry, force=args.force)
    outdir = Path(args.dot)
    outdir.mkdir(parents=True, exist_ok=True)
    files = []
    for i, d in enumerate(diags):
        c = d.contribution()
        path = outdir / f"diagram_{i:03d}_v{c.v}_e{c.e}.dot"
        path.write_text(to_dot(d) + "\n", encoding="utf-8")
        files.append(str(path))
    return {"symmetry": args.symmetry,
            "target": tau.cycle_string(),
            "max_order": args.max_order,
            "files": files,
            "count": len(files)}


def _verify_cases(args):
    sym_list = [UNITARY, ORTHOGONAL] if args.symmetry == "both" else [_symmetry(args.symmetry)]
    for sym in sym_list:
        for t in range(1, args.max_t + 1):
            for part in partitions(t):
                order = t + args.max_order
                if sym == UNITARY:
                    lhs = delta_series_u(part, order)
                    rhs = laurent_expand(v_cue(part), order)
                else:
                    lhs = delta_series_o(part, order)
                    rhs = laurent_expand(v_coe(part), order)
                case = {"symmetry": sym, "partition": list(part), "order": order,
                        "lhs": _series(lhs), "rhs": _series(rhs),
                        "equal": lhs == rhs}
                yield case
                diag_ok = args.with_diagrams and (
                    (sym == UNITARY and t <= 2) or (sym == ORTHOGONAL and t <= 1))
                if diag_ok:
                    dorder = min(order, t + 3)
                    tau = canonical_unitary_target(part) if sym == UNITARY \
                        else canonical_orthogonal_target(part)
                    ds = signed_sum(tau, dorder, sym)
                    ref = laurent_expand(v_cue(part) if sym == UNITARY else v_coe(part), dorder)
                    yield {"symmetry": sym, "partition": list(part),
                           "order": dorder, "check": "diagram signed sum",
                           "lhs": _series(ds), "rhs": _series(ref),
                           "equal": ds == ref}


def _cmd_verify(args) -> dict:
    cases = list(_verify_cases(args))
    if args.with_mc:
        checks = [
            (CorrelatorSpec(((1, 1),), ((1, 1),), CUE), v_cue((1,))),
            (CorrelatorSpec(((1, 2),), ((1, 2),), COE), v_coe((1,))),
        ]
        for spec, exact in checks:
            est = mc_correlator(spec, 4, args.samples, args.seed)
            target = float(exact.evaluate(4))
            ok = abs(est.mean.real - target) <= 5 * est.stderr and \
                abs(est.mean.imag) <= 5 * est.stderr
            cases.append({"symmetry": spec.ensemble, "check": "monte carlo",
                          "exact": target, "estimate": est.mean.real,
                          "stderr": est.stderr, "equal": ok})
    status = all(c["equal"] for c in cases)
    return {"cases": cases, "all_equal": status}


# -- entry point -------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "text"),
                     default=argparse.SUPPRESS)
    ap = argparse.ArgumentParser(prog="cuecoe", parents=[fmt])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weingarten", parents=[fmt], help="exact class coefficient")
    p.add_argument("--ensemble", type=_ensemble, required=True)
    p.add_argument("--partition", type=_partition, required=True)
    p.add_argument("--n", type=int)
    p.set_defaults(func=_cmd_weingarten)

    p = sub.add_parser("factorize", parents=[fmt], help="enumerate and count factorizations")
    p.add_argument("--type", dest="symmetry", type=_symmetry, required=True)
    p.add_argument("--partition", type=_partition, required=True)
    p.add_argument("--v", type=int, required=True)
    p.set_defaults(func=_cmd_factorize)

    p = sub.add_parser("series", parents=[fmt], help="factorization series vs class coefficient")
    p.add_argument("--type", dest="symmetry", type=_symmetry, required=True)
    p.add_argument("--partition", type=_partition, required=True)
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=_cmd_series)

    p = sub.add_parser("diagrams", parents=[fmt], help="enumerate ribbon diagrams")
    p.add_argument("--symmetry", type=str, default="u")
    p.add_argument("--target", type=str)
    p.add_argument("--partition", type=_partition)
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=_cmd_diagrams)

    p = sub.add_parser("correlator", parents=[fmt], help="exact matrix-element average")
    p.add_argument("--ensemble", type=_ensemble, required=True)
    p.add_argument("--z", type=_pairs, required=True)
    p.add_argument("--zstar", type=_pairs, required=True)
    p.add_argument("--n", type=int)
    p.set_defaults(func=_cmd_correlator)

    p = sub.add_parser("moment", parents=[fmt], help="exact transport moment")
    p.add_argument("--ensemble", type=_ensemble, required=True)
    p.add_argument("--traces", type=_partition, required=True)
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--block", type=lambda s: {"t": "transmission", "r": "reflection"}.get(s, s),
                   default="transmission")
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=_cmd_moment)

    p = sub.add_parser("mc", parents=[fmt], help="Monte Carlo estimate")
    p.add_argument("--ensemble", type=_ensemble, required=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--correlator", type=_pairs)
    p.add_argument("--zstar", type=_pairs)
    p.add_argument("--moment", type=_partition)
    p.add_argument("--n1", type=int, default=2)
    p.add_argument("--n2", type=int, default=2)
    p.add_argument("--block", type=lambda s: {"t": "transmission", "r": "reflection"}.get(s, s),
                   default="transmission")
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("render", parents=[fmt], help="emit DOT files for diagrams")
    p.add_argument("--symmetry", type=str, default="u")
    p.add_argument("--target", type=str)
    p.add_argument("--partition", type=_partition)
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--dot", type=str, required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("verify", parents=[fmt], help="run the equivalence checks")
    p.add_argument("--max-t", type=int, default=4)
    p.add_argument("--max-order", type=int, default=6)
    p.add_argument("--symmetry", type=str, default="both")
    p.add_argument("--with-diagrams", action="store_true")
    p.add_argument("--with-mc", action="store_true")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    if args.command == "diagrams" or args.command == "render":
        args.symmetry = _symmetry(args.symmetry)
    try:
        payload = args.func(args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(payload, getattr(args, "format", None) or "json")
    if args.command == "verify" and not payload["all_equal"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
