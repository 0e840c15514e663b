"""Command-line driver: ``torus-transport <experiment|ot|bounds|fit> [flags]``.

Exit status is 0 on success, 2 for invalid input and 3 when a numerical
routine fails to converge or a self-check is violated.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .bounds import bound_report
from .errors import BoundViolationError, NonConvergenceError, TorusTransportError, ValidationError
from .experiments import (
    DEFAULT_SEED,
    EXPERIMENTS,
    ExperimentConfig,
    describe,
    fit_loglog,
    primes_between,
    run_experiment,
)
from .io import emit, read_table, table_to_csv, to_json
from .measures import AtomicMeasure, Cdf, fourier_of_atoms
from .sequences import kronecker_measure, quadratic_residue_measure
from .transport import discrete_ot_oracle, w1_circle, w1_interval, wp_circle, wp_interval

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3


def parse_range(text: str, walk: str = "int") -> list:
    """Expand ``a..b`` (inclusive), a comma list, or a single value.

    ``walk`` decides how ``a..b`` is expanded: ``int`` (every integer),
    ``primes``, ``pow2`` (powers of two) or ``geom`` (13 log-spaced floats).
    """
    text = str(text).strip()
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        try:
            if walk == "geom":
                lo, hi = float(lo_s), float(hi_s)
            else:
                lo, hi = int(lo_s), int(hi_s)
        except ValueError:
            raise ValidationError(f"cannot parse range {text!r}") from None
        if hi < lo:
            raise ValidationError(f"empty range {text!r}")
        if walk == "int":
            out = list(range(lo, hi + 1))
        elif walk == "primes":
            out = primes_between(lo, hi)
        elif walk == "pow2":
            out = [2 ** k for k in range(0, 63) if lo <= 2 ** k <= hi]
        elif walk == "geom":
            if lo <= 0:
                raise ValidationError("log-spaced ranges need positive bounds")
            out = [float(v) for v in np.geomspace(lo, hi, 13)]
        else:
            raise ValueError(walk)
    else:
        conv = float if walk == "geom" else int
        try:
            out = [conv(v) for v in text.split(",") if v.strip()]
        except ValueError:
            raise ValidationError(f"cannot parse list {text!r}") from None
    if not out:
        raise ValidationError(f"range {text!r} is empty")
    return out


RANGE_WALKS = {
    ("quadres", "primes"): "primes",
    ("kronecker", "N"): "pow2",
    ("littlewood", "K"): "pow2",
    ("heat", "t"): "geom",
}


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--grid", type=int, default=None, help="grid size M")
    parser.add_argument("--p", type=float, default=None, help="transport exponent")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torus-transport", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("experiment", help="run a named parameter sweep")
    ex.add_argument("name", choices=sorted(EXPERIMENTS))
    ex.add_argument("--describe", action="store_true", help="print the experiment manifest and exit")
    for flag in ("primes", "N", "n", "K", "t"):
        ex.add_argument(f"--{flag}", default=None)
    ex.add_argument("--alpha", default=None)
    ex.add_argument("--family", default=None)
    ex.add_argument("--kind", choices=("roots", "critical"), default=None)
    ex.add_argument("--mode", choices=("two_step", "plan"), default=None)
    ex.add_argument("--eps", type=float, default=None)
    ex.add_argument("--count", type=int, default=None)
    ex.add_argument("--degree", type=int, default=None)
    ex.add_argument("--quantization", type=int, default=None)
    _common(ex)

    ot = sub.add_parser("ot", help="transport cost between two atom files")
    ot.add_argument("--mu", required=True, help="CSV of (location, weight)")
    ot.add_argument("--nu", default="uniform", help="CSV of (location, weight) or 'uniform'")
    ot.add_argument("--interval", action="store_true", help="use the interval metric instead of the circle")
    ot.add_argument("--oracle", action="store_true", help="also solve the discrete LP")
    ot.add_argument("--plan-out", default=None, help="write the oracle plan as CSV")
    _common(ot)

    bd = sub.add_parser("bounds", help="Fourier-side functionals of a measure")
    src = bd.add_mutually_exclusive_group(required=True)
    src.add_argument("--atoms", help="CSV of (location, weight)")
    src.add_argument("--quadres", type=int, help="odd prime p")
    src.add_argument("--kronecker", help="alpha tag, used with --count")
    bd.add_argument("--count", type=int, default=1024, help="number of Kronecker points")
    bd.add_argument("--n", type=int, required=True, help="Erdos-Turan truncation")
    bd.add_argument("--K", type=int, default=None, help="number of Fourier coefficients (default n)")
    bd.add_argument("--plist", default="1,2", help="comma list of exponents for the weighted l2 functional thm1_p")
    _common(bd)

    ft = sub.add_parser("fit", help="log-log slope of two columns of a CSV table")
    ft.add_argument("--in", dest="inp", required=True)
    ft.add_argument("--x", required=True)
    ft.add_argument("--y", required=True)
    _common(ft)
    return parser


def _cmd_experiment(args) -> str:
    if args.describe:
        return json.dumps(describe(args.name), indent=2) + "\n"
    defaults = EXPERIMENTS[args.name].defaults
    params = {}
    for flag in ("primes", "N", "n", "K", "t"):
        v = getattr(args, flag)
        if v is not None:
            if flag not in defaults:
                raise ValidationError(f"--{flag} does not apply to {args.name}")
            params[flag] = parse_range(v, RANGE_WALKS.get((args.name, flag), "int"))
    for flag in ("alpha", "family", "kind", "mode", "eps", "count", "degree", "quantization", "grid", "p", "seed"):
        v = getattr(args, flag)
        if v is not None and flag in defaults:
            params[flag] = v
    cfg = ExperimentConfig(args.name, params, args.out, args.format)
    result = run_experiment(cfg)
    if args.format == "json":
        return to_json(result.to_dict())
    return table_to_csv(result.rows, result.columns, result.footer())


def _load_measure(path: str) -> AtomicMeasure:
    return AtomicMeasure.from_csv(path)


def _cmd_ot(args) -> str:
    p = 1.0 if args.p is None else args.p
    mu = _load_measure(args.mu)
    if args.nu == "uniform":
        nu = Cdf.uniform(mu.total_mass)
    else:
        nu = _load_measure(args.nu)
    row = {"p": p, "metric": "interval" if args.interval else "circle"}
    if args.interval:
        row["cost"] = w1_interval(mu, nu) if p == 1 else wp_interval(mu, nu, p)
        row["shift"] = float("nan")
    else:
        res = w1_circle(mu, nu) if p == 1 else wp_circle(mu, nu, p)
        row["cost"], row["shift"] = res.cost, res.shift
    if args.oracle:
        if not isinstance(nu, AtomicMeasure):
            raise ValidationError("--oracle needs an atom file for --nu")
        cp, plan = discrete_ot_oracle(mu, nu, p, "interval" if args.interval else "circle")
        row["oracle_cost"] = cp ** (1.0 / p)
        if args.plan_out:
            plan.to_csv(args.plan_out)
    cols = list(row)
    if args.format == "json":
        return to_json({"result": row})
    return table_to_csv([row], cols)


def _cmd_bounds(args) -> str:
    K = args.K if args.K is not None else args.n
    if args.atoms:
        s = fourier_of_atoms(_load_measure(args.atoms), K)
    elif args.quadres is not None:
        s = fourier_of_atoms(quadratic_residue_measure(args.quadres), K)
    else:
        s = fourier_of_atoms(kronecker_measure(args.kronecker, args.count), K)
    plist = [float(v) for v in args.plist.split(",") if v.strip()]
    rep = bound_report(s, args.n, plist, sup_norm=math.inf)
    if args.format == "json":
        return to_json(rep.to_dict())
    return table_to_csv([rep.entries], rep.columns(), [f"flag {k}: {v}" for k, v in rep.flags.items()])


def _cmd_fit(args) -> str:
    cols, rows = read_table(args.inp)
    for c in (args.x, args.y):
        if c not in cols:
            raise ValidationError(f"column {c!r} not in {args.inp}")
    try:
        xs = [float(r[args.x]) for r in rows]
        ys = [float(r[args.y]) for r in rows]
    except ValueError:
        raise ValidationError("fit columns must be numeric") from None
    fit = fit_loglog(xs, ys)
    if args.format == "json":
        return to_json({"fit": fit.to_dict(), "x": args.x, "y": args.y})
    return table_to_csv([fit.to_dict()], ["slope", "intercept", "r_squared"])


COMMANDS = {"experiment": _cmd_experiment, "ot": _cmd_ot, "bounds": _cmd_bounds, "fit": _cmd_fit}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
        emit(text, args.out)
    except (NonConvergenceError, BoundViolationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except TorusTransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
