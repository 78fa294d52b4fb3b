"""Command-line front end: ``polymoments <subcommand> ...``.

Exit codes: 0 success, 2 input/syntax error, 3 numeric failure, 4 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import continuation as cont
from .errors import InputError, NumericError, PolyMomentsError, ResourceLimitError
from .growth import DEFAULT_TOL, METHOD_ALIASES, bound_check, conjecture_check, estimate_growth
from .lab import GeneratorConfig, run_sweep, summary_csv, write_report
from .moments import DEFAULT_BIT_CAP, format_csv, format_exact, moment_sequence
from .polynomial import parse_poly
from .spectrum import critical_set, sup_norm

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_RESOURCE = 0, 2, 3, 4

# flags whose values may legitimately start with '-' (e.g. --poly -1/2,1)
_VALUE_FLAGS = {"--poly", "--t", "--tau-start", "--tau-end", "--window", "--degree"}


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def _int_pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'LO,HI', got {text!r}") from None
    return a, b


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _dump(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def cmd_moments(args) -> int:
    f = parse_poly(args.poly)
    seq = moment_sequence(f, args.n_max, args.bit_cap)
    sys.stdout.write(format_exact(seq) if args.out == "exact" else format_csv(seq))
    return EXIT_OK


def cmd_critical_set(args) -> int:
    f = parse_poly(args.poly)
    print(critical_set(f).to_json())
    return EXIT_OK


def cmd_growth(args) -> int:
    f = parse_poly(args.poly)
    seq = moment_sequence(f, args.n_max, args.bit_cap)
    est = estimate_growth(seq, args.method, args.window)
    S = critical_set(f)
    holds, slack = bound_check(f, est, S, args.tol)
    equal, gap = conjecture_check(f, est, S, args.tol)
    _dump({
        "poly": f.to_text(),
        "estimate": est.to_dict(),
        "sup_norm": sup_norm(f).value,
        "max_modulus_S": S.max_modulus,
        "bound_holds": holds,
        "bound_slack": slack,
        "conjecture_holds": equal,
        "conjecture_gap": gap,
    })
    return EXIT_OK


def cmd_eval_f(args) -> int:
    f = parse_poly(args.poly)
    t = args.t
    if args.method == "series":
        fv = cont.f_series(f, moment_sequence(f, args.n_max, args.bit_cap), t, margin=args.margin)
    elif args.method == "quadrature":
        fv = cont.f_quadrature(f, t, critical_set(f), clearance=args.clearance or 0.0)
    else:
        if f.degree() < 1:
            raise InputError("partial-fraction evaluation needs deg(f) >= 1")
        fv = cont.evaluate_partial_fraction(f, t, clearance=args.clearance)
    _dump(fv.to_dict())
    return EXIT_OK


def cmd_trace(args) -> int:
    f = parse_poly(args.poly)
    S = critical_set(f)
    path = cont.plan_path(S, args.tau_start, args.tau_end, args.clearance)
    bundles = cont.track_roots(f, path, delta_L=args.delta_l)
    header = {
        "poly": f.to_text(),
        "convention": cont.DETOUR_CONVENTION,
        "clearance": path.clearance,
        "waypoints": [_pair(w) for w in path.waypoints],
    }
    if args.dump:
        with open(args.dump, "w") as fh:
            cont.write_trace(bundles, fh, header)
    last = bundles[-1]
    closed = abs(args.tau_end - args.tau_start) <= 1e-12 * (1 + abs(args.tau_start))
    summary = dict(header)
    summary.update({
        "steps": len(bundles) - 1,
        "final": last.to_dict(),
        "permutation": list(cont.monodromy(bundles)) if closed else None,
    })
    if f.degree() >= 1:
        summary["F"] = cont.f_partial_fraction(f, last).to_dict()
    _dump(summary)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = GeneratorConfig(
        seed=args.seed,
        degree_range=args.degree,
        numerator_bound=args.num_bound,
        denominator_bound=args.den_bound,
        allow_complex=args.complex,
        count=args.count,
    )
    records = run_sweep(
        cfg, args.n_max, method=METHOD_ALIASES[args.method], window=args.window,
        tol=args.tol, bit_cap=args.bit_cap, jobs=args.jobs,
    )
    header = {
        "seed": cfg.seed,
        "count": cfg.count,
        "degree_range": list(cfg.degree_range),
        "numerator_bound": cfg.numerator_bound,
        "denominator_bound": cfg.denominator_bound,
        "allow_complex": cfg.allow_complex,
        "n_max": args.n_max,
        "method": METHOD_ALIASES[args.method],
        "tol": args.tol,
    }
    out = Path(args.out)
    with out.open("w") as fh:
        write_report(records, fh, header)
    out.with_suffix(".csv").write_text(summary_csv(records))
    failed = sum(r.error is not None for r in records)
    violations = sum(r.bound_holds is False for r in records)
    findings = sum(r.conjecture_holds is False for r in records)
    print(f"{len(records)} records, {failed} errors, {violations} bound violations, "
          f"{findings} conjecture gaps > tol -> {out}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polymoments", description="Moments of complex polynomials on [0, 1].")
    sub = p.add_subparsers(dest="command", required=True)

    def poly_arg(sp):
        sp.add_argument("--poly", required=True, help="coefficients a0,a1,...,ad, e.g. -1/2,1")

    def n_max_arg(sp, default=200):
        sp.add_argument("--n-max", type=int, default=default)
        sp.add_argument("--bit-cap", type=int, default=DEFAULT_BIT_CAP, help="max bits per exact coefficient")

    sp = sub.add_parser("moments", help="exact moments M_0..M_N")
    poly_arg(sp)
    n_max_arg(sp)
    sp.add_argument("--out", choices=["exact", "csv"], default="exact")
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("critical-set", help="singular set S as JSON")
    poly_arg(sp)
    sp.set_defaults(func=cmd_critical_set)

    sp = sub.add_parser("growth", help="estimate limsup |M_n|^(1/n) and compare with max|S|")
    poly_arg(sp)
    n_max_arg(sp)
    sp.add_argument("--method", choices=["slope", "rootmax", "ratio"], default="slope")
    sp.add_argument("--window", type=_int_pair, default=None, help="LO,HI (default n_max/4,n_max)")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.set_defaults(func=cmd_growth)

    sp = sub.add_parser("eval-f", help="evaluate the generating function F(t)")
    poly_arg(sp)
    sp.add_argument("--t", type=_complex_arg, required=True, help="re,im")
    sp.add_argument("--method", choices=["series", "quadrature", "pf"], default="pf")
    sp.add_argument("--clearance", type=float, default=None)
    sp.add_argument("--margin", type=float, default=cont.DEFAULT_MARGIN)
    n_max_arg(sp)
    sp.set_defaults(func=cmd_eval_f)

    sp = sub.add_parser("trace", help="track the roots of f(z) = tau along a planned path")
    poly_arg(sp)
    sp.add_argument("--tau-start", type=_complex_arg, required=True)
    sp.add_argument("--tau-end", type=_complex_arg, required=True)
    sp.add_argument("--clearance", type=float, default=None)
    sp.add_argument("--delta-l", type=float, default=cont.DEFAULT_DELTA_L, help="max log jump per step")
    sp.add_argument("--dump", default=None, help="write JSON-lines trace here")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("sweep", help="seeded conjecture sweep over a random corpus")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--degree", type=_int_pair, required=True, help="MIN,MAX")
    sp.add_argument("--n-max", type=int, default=200)
    sp.add_argument("--complex", action="store_true")
    sp.add_argument("--num-bound", type=int, default=5)
    sp.add_argument("--den-bound", type=int, default=4)
    sp.add_argument("--method", choices=["slope", "rootmax", "ratio"], default="slope")
    sp.add_argument("--window", type=_int_pair, default=None)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--bit-cap", type=int, default=DEFAULT_BIT_CAP)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_sweep)
    return p


def _glue_values(argv: Sequence[str]) -> list[str]:
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_values(argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PolyMomentsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
