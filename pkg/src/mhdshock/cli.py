"""Command-line front end.

Exit codes: 0 success, 2 invalid or infeasible parameters, 3 convergence or
evaluation failure.
"""

import argparse
import csv
import datetime
import io
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .errors import ConvergenceError, MHDShockError, NoShockError
from .lopatinski import AXIS_EPS, DeltaValue, SpectralPoint, delta, delta_on_axis
from .shock import parallel_shock, rh_residual, shock
from .tracker import (
    NEWTON_TOL,
    CriticalPoint,
    ModePoint,
    solve_critical_point,
    trace_critical_curve,
    trace_instability,
    verify_theorem1,
)

log = logging.getLogger("mhdshock")

EXIT_OK, EXIT_INVALID, EXIT_CONVERGE = 0, 2, 3
DEFAULT_A0 = (1.5, 2.0, 2.5, 3.0)

THEOREM1_COLUMNS = ("a", "rho_formula", "rho_numeric", "gap", "status")
CRITICAL_COLUMNS = ("a", "c", "R", "gamma", "residual")
INSTABILITY_COLUMNS = ("xi", "a", "rho_plus", "alpha", "beta", "residual")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _positive(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return x


def fmt(x):
    """Fixed CSV float format: 17 significant digits, scientific."""
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == 0:
        x = 0.0  # drop the sign of -0.0
    return f"{x:.16e}"


def _emit(args, columns, rows, meta):
    if args.format == "json":
        data = {"columns": {name: [_json_value(r[i]) for r in rows] for i, name in enumerate(columns)},
                "meta": dict(meta, tool="mhdshock", version=__version__,
                             timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat())}
        text = json.dumps(data, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(x) for x in r])
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_value(x):
    if isinstance(x, str):
        return x
    return None if math.isnan(x) else float(x)


def _state_dict(st):
    return {"rho": st.rho, "v": st.v, "w": st.w, "a": st.a, "b": st.b}


def _read_seed_row(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"seed file {path} has no data rows")
    return {k: float(v) for k, v in rows[-1].items() if v not in ("", None) and k != "status"}


def cmd_shock(args):
    s = shock(args.a, args.rho_plus, args.c, branch=args.branch)
    out = {
        "left": _state_dict(s.left),
        "right": _state_dict(s.right),
        "m": s.m,
        "j": s.j,
        "c": s.c,
        "lax_type": s.lax_type.value,
        "rh_residual": rh_residual(s),
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_delta(args):
    if args.lambda_re < 0:
        print("error: Re lambda < 0 is outside S+", file=sys.stderr)
        return EXIT_INVALID
    s = shock(args.a, args.rho_plus, args.c, branch=args.branch)
    if args.lambda_re == 0:
        dv = delta_on_axis(s, args.lambda_im, args.omega, eps=args.axis_eps)
    else:
        dv = delta(s, SpectralPoint(complex(args.lambda_re, args.lambda_im), args.omega))
    _print_delta(dv)
    return EXIT_OK


def _print_delta(dv: DeltaValue):
    print(f"delta: {fmt(dv.delta.real)} {fmt(dv.delta.imag)}")
    print(f"sigma_min: {fmt(dv.sigma_min)}")
    print(f"dims: {dv.dim_stable_minus},{dv.dim_unstable_plus}")
    if dv.regularized is not None:
        print(f"regularized: {fmt(dv.regularized)}")


def _grid(a_from, a_to, steps):
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if steps == 1:
        return [float(a_from)]
    return [float(x) for x in np.linspace(a_from, a_to, steps)]


def _map(fn, items, jobs):
    if jobs and jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _theorem1_one(job):
    a, eps = job
    return verify_theorem1([a], eps=eps)[0]


def cmd_theorem1(args):
    grid = _grid(args.a_from, args.a_to, args.steps)
    results = _map(_theorem1_one, [(a, args.axis_eps) for a in grid], args.jobs)
    rows = [(r.a, r.rho_formula, r.rho_numeric, r.gap, r.status) for r in results]
    _emit(args, THEOREM1_COLUMNS, rows, {"axis_eps": args.axis_eps})
    return EXIT_OK


def _critical_one(job):
    c, a_from, a_to, steps, seed, newton_tol, eps = job
    try:
        trace = trace_critical_curve(c, a_from, a_to, steps, seed=seed, newton_tol=newton_tol, eps=eps)
        return list(trace), (trace.boundary, trace.stopped_at), None
    except ConvergenceError as exc:
        return exc.partial, (None, None), str(exc)


def cmd_critical(args):
    if args.steps < 2:
        raise ValueError("steps must be >= 2 for traces")
    c_values = args.c_list if args.c_list is not None else [args.c]
    seed = None
    if args.seed_file:
        row = _read_seed_row(args.seed_file)
        seed = CriticalPoint(row["a"], row["c"], row["R"], row["gamma"], row.get("residual", math.nan))
    jobs = [(c, args.a_from, args.a_to, args.steps, seed, args.newton_tol, args.axis_eps) for c in c_values]
    rows, failed = [], False
    for c, (points, (lower, stopped), err) in zip(c_values, _map(_critical_one, jobs, args.jobs)):
        rows.extend((p.a, p.c, p.R, p.gamma, p.residual) for p in points)
        if lower is not None:
            print(f"warning: c={c}: no critical point at a={lower}; lower edge of the solved range", file=sys.stderr)
        if stopped is not None:
            print(f"warning: c={c}: no slow shock at a={stopped}, trace stopped", file=sys.stderr)
        if err:
            print(f"error: converge: {err}", file=sys.stderr)
            failed = True
    _emit(args, CRITICAL_COLUMNS, rows,
          {"newton_tol": args.newton_tol, "axis_eps": args.axis_eps, "c_list": c_values})
    return EXIT_CONVERGE if failed else EXIT_OK


def _instability_one(job):
    a0, c, xi_max, steps, seed, eps = job
    try:
        kw = {}
        if seed is not None:
            xi_grid = [x for x in np.linspace(0.0, xi_max, steps) if x > seed.xi]
            kw = dict(critical=CriticalPoint(a0, c, seed.rho_plus, math.nan, math.nan), seed=seed)
            trace = trace_instability(a0, c, xi_values=xi_grid, eps=eps, **kw) if xi_grid else []
        else:
            trace = trace_instability(a0, c, xi_max, steps, eps=eps)
        return list(trace), getattr(trace, "boundary", None), None
    except (ConvergenceError, MHDShockError) as exc:
        return getattr(exc, "partial", []), None, f"{exc.kind}: {exc}"


def cmd_instability(args):
    if args.steps < 2:
        raise ValueError("steps must be >= 2 for traces")
    a0_values = args.a0 if args.a0 is not None else list(DEFAULT_A0)
    seed = None
    if args.seed_file:
        row = _read_seed_row(args.seed_file)
        if len(a0_values) != 1:
            raise ValueError("--seed-file needs a single --a0")
        seed = ModePoint(a0_values[0], args.c, row["xi"], row["alpha"], row["beta"],
                         row.get("residual", math.nan), row["rho_plus"])
    jobs = [(a0, args.c, args.xi_max, args.steps, seed, args.axis_eps) for a0 in a0_values]
    rows, failed = [], False
    for a0, (points, boundary, err) in zip(a0_values, _map(_instability_one, jobs, args.jobs)):
        rows.extend((p.xi, p.a, p.rho_plus, p.alpha, p.beta, p.residual) for p in points)
        if boundary is not None:
            print(f"warning: a0={a0}: no slow shock at a={boundary}, trace stopped", file=sys.stderr)
        if err:
            print(f"error: {err}", file=sys.stderr)
            failed = True
    meta = {"axis_eps": args.axis_eps, "a0": a0_values, "c": args.c,
            "a0_default_grid": args.a0 is None}
    _emit(args, INSTABILITY_COLUMNS, rows, meta)
    return EXIT_CONVERGE if failed else EXIT_OK


def build_parser():
    p = _Parser(prog="mhdshock", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def shock_flags(sp):
        sp.add_argument("--a", type=float, required=True, help="normal magnetic field")
        sp.add_argument("--rho-plus", type=float, required=True, help="downstream density (upstream is 1)")
        sp.add_argument("--c", type=float, default=0.0, help="transverse invariant v*b - a*w")
        sp.add_argument("--branch", choices=("slow", "fast"), default=None)

    def common(sp, traces=False):
        sp.add_argument("--axis-eps", type=_positive, default=AXIS_EPS)
        sp.add_argument("--newton-tol", type=_positive, default=NEWTON_TOL)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default=None, metavar="PATH")
        sp.add_argument("--jobs", type=int, default=1)
        if traces:
            sp.add_argument("--seed-file", default=None, metavar="CSV",
                            help="resume from the last row of an earlier output")

    sp = sub.add_parser("shock", help="construct a shock and print it as JSON")
    shock_flags(sp)
    sp.set_defaults(func=cmd_shock)

    sp = sub.add_parser("delta", help="evaluate the Lopatinski determinant")
    shock_flags(sp)
    sp.add_argument("--lambda-re", type=float, default=0.0)
    sp.add_argument("--lambda-im", type=float, default=0.0)
    sp.add_argument("--omega", type=float, default=1.0, choices=(-1.0, 1.0))
    sp.add_argument("--axis-eps", type=_positive, default=AXIS_EPS)
    sp.set_defaults(func=cmd_delta)

    sp = sub.add_parser("theorem1", help="locate the lambda=0 zero of slow parallel shocks")
    sp.add_argument("--a-from", type=float, required=True)
    sp.add_argument("--a-to", type=float, default=None)
    sp.add_argument("--steps", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_theorem1)

    sp = sub.add_parser("critical", help="trace a -> (R(a,c), gamma(a,c))")
    sp.add_argument("--a-from", type=_positive, required=True)
    sp.add_argument("--a-to", type=float, required=True)
    sp.add_argument("--steps", type=int, default=21)
    sp.add_argument("--c", type=float, default=0.0)
    sp.add_argument("--c-list", type=_float_list, default=None)
    common(sp, traces=True)
    sp.set_defaults(func=cmd_critical)

    sp = sub.add_parser("instability", help="trace the unstable mode along a = a0 + xi")
    sp.add_argument("--a0", type=_float_list, default=None,
                    help="comma-separated; default %s" % ",".join(map(str, DEFAULT_A0)))
    sp.add_argument("--c", type=float, default=0.0)
    sp.add_argument("--xi-max", type=_positive, default=0.1)
    sp.add_argument("--steps", type=int, default=11)
    common(sp, traces=True)
    sp.set_defaults(func=cmd_instability)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help/--version exit 0, usage errors exit 2
        return exc.code if isinstance(exc.code, int) else 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "a_to", 0) is None:
        args.a_to = args.a_from
    if hasattr(args, "branch") and args.branch is None:
        args.branch = _default_branch(args)
    try:
        return args.func(args)
    except NoShockError as exc:
        print(f"error: noshock: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except MHDShockError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return EXIT_CONVERGE


def _default_branch(args):
    # parallel shocks report whichever Lax type they have; otherwise slow
    if args.c == 0:
        try:
            t = parallel_shock(args.a, args.rho_plus).lax_type.value
            return t if t != "none" else "slow"
        except NoShockError:
            return "slow"
    return "slow"
