"""Command-line front end.

Subcommands: compute, sweep, table1, ball, rect, check, domain.
Exit codes: 0 success, 2 usage or parse failure, 3 solver failure
(including a compute run that did not certify convergence).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import analytic, checks, counting, geom, specfun
from .errors import IsospecError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3

_INT_FAMILIES = {"comb", "waffle", "regular", "random"}


def _parse_range(text: str, integer: bool):
    """lo:hi:step with inclusive endpoints under exact decimal parsing,
    or a comma-separated value list."""
    def convert(f: Fraction):
        if integer:
            if f.denominator != 1:
                raise ValueError(f"expected integer parameter, got {f}")
            return int(f)
        return float(f)

    if ":" in text:
        parts = text.split(":")
        if len(parts) == 2:
            lo, hi, step = Fraction(parts[0]), Fraction(parts[1]), Fraction(1)
        elif len(parts) == 3:
            lo, hi, step = (Fraction(p) for p in parts)
        else:
            raise ValueError(f"bad range syntax {text!r}")
        if step <= 0 or hi < lo:
            raise ValueError(f"bad range {text!r}")
        values = []
        v = lo
        while v <= hi:
            values.append(convert(v))
            v += step
        return values
    return [convert(Fraction(p)) for p in text.split(",") if p != ""]


def _parse_seeds(text: str):
    """A bare integer means that many seeds (0..k-1); a comma list is explicit."""
    if "," in text:
        return [int(p) for p in text.split(",") if p != ""]
    count = int(text)
    if count < 1:
        raise ValueError("seed count must be positive")
    return list(range(count))


def _solve_options(args) -> counting.SolveOptions:
    kwargs = {}
    if args.h0 is not None:
        kwargs["h0"] = args.h0
    if args.max_levels is not None:
        kwargs["max_levels"] = args.max_levels
    if args.tie_rel_tol is not None:
        kwargs["tie_rel_tol"] = args.tie_rel_tol
    return counting.SolveOptions(**kwargs)


def _add_solver_args(p):
    p.add_argument("--h0", type=float, default=None, help="initial mesh size target")
    p.add_argument("--max-levels", type=int, default=None, help="refinement level cap")
    p.add_argument("--tie-rel-tol", type=float, default=None,
                   help="relative tolerance counting threshold ties as included")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="output format for report rows")


def _serialize(reports, fmt):
    if fmt == "json":
        return counting.reports_to_json(reports)
    return counting.reports_to_csv(reports)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _make_domain(args):
    if getattr(args, "domain", None):
        with open(args.domain) as fh:
            return geom.domain_from_json(fh.read())
    if not args.family:
        raise ValueError("either --family or --domain is required")
    gen = geom.GENERATORS.get(args.family)
    if gen is None:
        raise ValueError(f"unknown family {args.family!r}")
    if args.param is None:
        raise ValueError("--param is required together with --family")
    integer = args.family in _INT_FAMILIES
    param = int(args.param) if integer else float(Fraction(args.param))
    if args.family == "random":
        return gen(param, int(args.seed if args.seed is not None else 0))
    return gen(param)


def cmd_compute(args) -> int:
    try:
        domain = _make_domain(args)
    except (OSError, ValueError, KeyError, IsospecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = counting.compute_N(domain, _solve_options(args))
    except IsospecError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    _emit(_serialize([report], args.format), args.out)
    return EXIT_OK if report.converged else EXIT_SOLVER


def cmd_sweep(args) -> int:
    try:
        integer = args.family in _INT_FAMILIES
        if args.family == "random":
            params = _parse_range(args.sides or args.params, integer=True)
            seeds = _parse_seeds(args.seeds) if args.seeds else [0]
        else:
            if not args.params:
                raise ValueError("--params is required")
            params = _parse_range(args.params, integer=integer)
            seeds = None
        reports = counting.sweep(args.family, params, _solve_options(args), seeds=seeds)
    except (ValueError, IsospecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(_serialize(reports, args.format), args.out)
    return EXIT_OK


def cmd_table1(args) -> int:
    rows = specfun.zero_table()
    lines = ["  n    p(1)    p(2)    p(3)    j(n/2-1,1)"]
    for n, p1, p2, p3, j in rows:
        lines.append(f"{n:3d}  {p1:6.2f}  {p2:6.2f}  {p3:6.2f}  {j:10.2f}")
    print("\n".join(lines))
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("n,p1,p2,p3,j\n")
            for n, p1, p2, p3, j in rows:
                fh.write(f"{n},{p1!r},{p2!r},{p3!r},{j!r}\n")
    return EXIT_OK


def cmd_ball(args) -> int:
    if args.n_max < 2 or args.n_max > 64:
        print("error: n_max must lie in [2, 64]", file=sys.stderr)
        return EXIT_USAGE
    rows = []
    for n in range(2, args.n_max + 1):
        bc = analytic.ball_N(n)
        rows.append((n, bc.lambda1, bc.count, analytic.ball_isoperimetric(n)))
    print("  n     lambda1        N(B^n)    I(B^n)")
    for n, lam, count, iso in rows:
        print(f"{n:3d}  {lam:10.4f}  {count:10d}  {iso:12.4f}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("n,lambda1,N,I\n")
            for n, lam, count, iso in rows:
                fh.write(f"{n},{lam!r},{count},{iso!r}\n")
    return EXIT_OK


def cmd_rect(args) -> int:
    try:
        spec = analytic.RectangleSpec.of(*args.lengths)
        result = analytic.rectangle_sandwich_check(spec)
    except IsospecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"lengths       : {', '.join(str(v) for v in args.lengths)}")
    print(f"N (exact)     : {result.n_lattice}")
    print(f"I             : {result.iso_ratio!r}")
    print(f"bounds hold   : lower={result.lower_ok} upper={result.upper_ok}")
    for name, value in result.ratios.items():
        print(f"  N / ({name}) = {value:.6f}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("N,I,lower_ok,upper_ok\n")
            fh.write(f"{result.n_lattice},{result.iso_ratio!r},"
                     f"{str(result.lower_ok).lower()},{str(result.upper_ok).lower()}\n")
    return EXIT_OK


def cmd_check(_args) -> int:
    results = checks.run_all()
    failed = 0
    for name, ok, message in results:
        status = "ok" if ok else "FAIL"
        line = f"[{status:4s}] {name}"
        if message:
            line += f" -- {message}"
        print(line)
        if not ok:
            failed += 1
    return EXIT_OK if failed == 0 else 1


def cmd_domain(args) -> int:
    try:
        domain = _make_domain(args)
    except (OSError, ValueError, KeyError, IsospecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(geom.domain_to_json(domain) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isospec",
        description="Spectral counts N and isoperimetric ratios I for planar domains")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="one domain, one CSV row")
    p.add_argument("--family", default=None, choices=sorted(geom.GENERATORS))
    p.add_argument("--param", default=None, help="generator parameter")
    p.add_argument("--seed", type=int, default=None, help="seed (random family)")
    p.add_argument("--domain", default=None, help="path to a domain JSON file")
    p.add_argument("--out", default=None)
    _add_solver_args(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="one family, many parameters")
    p.add_argument("--family", required=True, choices=sorted(geom.GENERATORS))
    p.add_argument("--params", default=None, help="lo:hi:step (inclusive) or v1,v2,...")
    p.add_argument("--sides", default=None, help="vertex counts for the random family")
    p.add_argument("--seeds", default=None,
                   help="seed count k (uses 0..k-1) or explicit s1,s2,...")
    p.add_argument("--out", default=None)
    _add_solver_args(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table1", help="ultraspherical zero grid, 2 decimals")
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("ball", help="lambda1, N and I of unit balls up to n_max")
    p.add_argument("n_max", type=int)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("rect", help="exact N, I and sandwich ratios of a rectangle")
    p.add_argument("lengths", nargs="+", help="side lengths (exact decimals)")
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_rect)

    p = sub.add_parser("check", help="run the invariant suite")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("domain", help="emit a generated domain as JSON")
    p.add_argument("--family", required=True, choices=sorted(geom.GENERATORS))
    p.add_argument("--param", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_domain)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
