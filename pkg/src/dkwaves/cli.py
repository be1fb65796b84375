"""Command-line interface.

Usage::

    dkwaves eval --kind I --J 2 --M 1 --r 1:5:3 --theta 1.1 --phi 0.4
    dkwaves certify --J-max 3 --output report.json
    dkwaves expand --kind II --J 2 --M -1 --delta -1 --points 5 --seed 7
    dkwaves curved-scan --J 2 --chi 0.05:3.05:100 --format csv

Grid flags take either a single value or ``lo:hi:count``.  A flat
``key=value`` file passed with ``--config`` supplies defaults; explicit flags
override it.  Exit codes: 0 success, 1 a check failed, 2 usage or
precondition error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .certify import CertifyConfig, run_checks
from .curved import CurvedRadialParams, scan
from .errors import DKWavesError
from .fermion_map import verify_expansion
from .fields import BosonModeSpec, DiracModeSpec, SpacetimePoint, eval_Psi, eval_U

__all__ = ["main", "build_parser", "parse_grid"]

SCHEMA_VERSION = 1
SEED_ENV = "DKWAVES_SEED"


class UsageError(Exception):
    """Bad flags, config or environment; maps to exit code 2."""


def parse_grid(text: str) -> tuple[float, float, int]:
    """``"x"`` -> ``(x, x, 1)``; ``"lo:hi:count"`` -> ``(lo, hi, count)``."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            x = float(parts[0])
            return x, x, 1
        if len(parts) == 3:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise argparse.ArgumentTypeError(f"grid count must be >= 1 in {text!r}")
            if n > 1 and hi < lo:
                raise argparse.ArgumentTypeError(f"grid upper bound below lower bound in {text!r}")
            return lo, hi, n
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected a number or lo:hi:count, got {text!r}")


def grid_values(grid: tuple[float, float, int]) -> list[float]:
    lo, hi, n = grid
    return [lo] if n == 1 else [float(x) for x in np.linspace(lo, hi, n)]


def _sign(text: str) -> int:
    if text.strip() in ("1", "+1"):
        return 1
    if text.strip() == "-1":
        return -1
    raise argparse.ArgumentTypeError(f"expected +1 or -1, got {text!r}")


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _add_common(p: argparse.ArgumentParser, default_format: str) -> None:
    p.add_argument("--config", help="flat key=value file with defaults")
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--output", "-o", help="output path (default: stdout)")
    p.add_argument("--seed", type=int, default=None,
                   help=f"random seed (falls back to ${SEED_ENV}, then 0)")
    p.add_argument("--workers", type=int, default=1, help="worker threads for sweeps")
    p.add_argument("--epsilon", type=float, default=1.25)
    p.add_argument("--mass", type=float, default=0.75)


def _add_mode(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=("I", "II", "J0"), default="I")
    p.add_argument("--J", type=int, default=1)
    p.add_argument("--M", type=int, default=0)
    p.add_argument("--delta", type=_sign, default=1)
    p.add_argument("--lambda", dest="lambda_sign", type=_sign, default=1)


def _add_space(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t", type=parse_grid, default=parse_grid("0"))
    p.add_argument("--r", type=parse_grid, default=parse_grid("2.0"))
    p.add_argument("--theta", type=parse_grid, default=parse_grid("1.1"))
    p.add_argument("--phi", type=parse_grid, default=parse_grid("0.4"))
    p.add_argument("--points", type=int, default=0,
                   help="draw this many random points inside the grid ranges instead")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dkwaves", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a boson or Dirac wave on a grid")
    _add_common(p, "csv")
    _add_mode(p)
    _add_space(p)
    p.add_argument("--field", choices=("U", "Psi"), default="U")
    p.add_argument("--j", type=float, default=0.5, help="Dirac total angular momentum")
    p.add_argument("--m", type=float, default=0.5, help="Dirac projection")
    p.add_argument("--channel", type=int, default=1, choices=(1, 2, 3, 4))

    p = sub.add_parser("certify", help="run every numerical certificate")
    _add_common(p, "json")
    p.add_argument("--J-max", dest="J_max", type=int, default=3)
    p.add_argument("--points", type=int, default=4, help="random samples per check and case")
    p.add_argument("--h", type=_positive, default=1e-4, help="finite-difference step")
    p.add_argument("--tolerance", type=float, default=None, help="override every tolerance")
    p.add_argument("--check", action="append", default=None, help="run only the named check(s)")

    p = sub.add_parser("expand", help="verify a boson->fermion expansion at random points")
    _add_common(p, "csv")
    _add_mode(p)
    _add_space(p)
    p.set_defaults(points=5, r=parse_grid("1:5:2"), theta=parse_grid("0.4:2.7:2"),
                   phi=parse_grid("0:6.283185307179586:2"), t=parse_grid("0:1:2"))
    p.add_argument("--tolerance", type=float, default=1e-10)

    p = sub.add_parser("curved-scan", help="obstruction gap on the curved sphere")
    _add_common(p, "csv")
    p.add_argument("--J", type=int, default=1)
    p.add_argument("--chi", type=parse_grid, default=parse_grid("0.05:3.05:61"))
    return parser


def _read_config(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from exc
    args: list[str] = []
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in ("config", ""):
            raise UsageError(f"{path}:{n}: invalid key {key!r}")
        args += [f"--{key.replace('_', '-') if key not in ('J', 'M') else key}", value]
    return args


def _expand_config(argv: list[str]) -> list[str]:
    """Insert config-file flags right after the subcommand so explicit flags win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config or not argv:
        return argv
    cmd_at = next((i for i, a in enumerate(argv) if not a.startswith("-")), None)
    if cmd_at is None:
        return argv
    return argv[:cmd_at + 1] + _read_config(known.config) + argv[cmd_at + 1:]


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None or env.strip() == "":
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from exc


def _points(args, seed: int) -> list[SpacetimePoint]:
    axes = (args.t, args.r, args.theta, args.phi)
    if args.points and args.points > 0:
        rng = np.random.default_rng(seed)
        draws = [rng.uniform(lo, hi, args.points) if n > 1 else np.full(args.points, lo)
                 for lo, hi, n in axes]
        return [SpacetimePoint(*(float(d[i]) for d in draws)) for i in range(args.points)]
    return [SpacetimePoint(*x) for x in itertools.product(*(grid_values(a) for a in axes))]


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))  # map keeps input order


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _json_value(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _table(columns: list[str], rows: list[list], fmt: str, command: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
        return buf.getvalue()
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "columns": columns,
           "rows": [[_json_value(x) for x in row] for row in rows]}
    return json.dumps(doc, indent=2) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _boson(args) -> BosonModeSpec:
    return BosonModeSpec(args.epsilon, args.J, args.M, args.delta, args.lambda_sign, args.kind, args.mass)


def cmd_eval(args) -> int:
    seed = resolve_seed(args.seed)
    pts = _points(args, seed)
    if args.field == "U":
        spec = _boson(args)
        names = [f"U{i}{k}" for i in range(1, 5) for k in range(1, 5)]

        def value(p):
            return eval_U(spec, p).reshape(16)
    else:
        spec = DiracModeSpec(args.epsilon, args.j, args.m, args.delta, args.channel, args.mass)
        names = [f"psi{i}" for i in range(1, 5)]

        def value(p):
            return eval_Psi(spec, p)

    columns = ["t", "r", "theta", "phi"] + [f"{n}_{part}" for n in names for part in ("re", "im")]
    values = _map(value, pts, args.workers)
    rows = []
    for p, v in zip(pts, values):
        row = [p.t, p.r, p.theta, p.phi]
        for z in v:
            row += [float(z.real), float(z.imag)]
        rows.append(row)
    _emit(_table(columns, rows, args.format, "eval"), args.output)
    return 0


def cmd_certify(args) -> int:
    cfg = CertifyConfig(J_max=args.J_max, points=args.points, seed=resolve_seed(args.seed),
                        h=args.h, epsilon=args.epsilon, mass=args.mass)
    only = tuple(args.check) if args.check else None
    results = run_checks(cfg, tolerance=args.tolerance, workers=args.workers, only=only)
    if only and len(results) != len(set(only)):
        known = {r.name for r in results}
        raise UsageError(f"unknown check(s): {sorted(set(only) - known)}")
    ok = all(r.passed for r in results)
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": "certify",
            "config": {"J_max": cfg.J_max, "points": cfg.points, "seed": cfg.seed, "h": cfg.h,
                       "epsilon": cfg.epsilon, "mass": cfg.mass, "tolerance_override": args.tolerance},
            "checks": [{k: _json_value(v) for k, v in r.as_dict().items()} for r in results],
            "passed": ok,
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        rows = [[r.name, r.tag, r.max_residual if r.max_residual is not None else "nan",
                 r.tolerance, "pass" if r.passed else "fail"] for r in results]
        text = _table(["name", "tag", "max_residual", "tolerance", "verdict"], rows, "csv", "certify")
    _emit(text, args.output)
    for r in results:
        if r.error:
            print(f"dkwaves: check {r.name} raised {r.error}", file=sys.stderr)
    return 0 if ok else 1


def cmd_expand(args) -> int:
    spec = _boson(args)
    pts = _points(args, resolve_seed(args.seed))
    reports = _map(lambda p: verify_expansion(spec, p), pts, args.workers)
    columns = ["t", "r", "theta", "phi", "branch", "j", "dirac_parity", "c1", "c2",
               "residual_col1", "residual_col2", "residual_col3", "residual_col4",
               "max_residual", "verdict"]
    rows = []
    ok = True
    for p, rep in zip(pts, reports):
        passed = rep.max_residual <= args.tolerance
        ok &= passed
        rows.append([p.t, p.r, p.theta, p.phi, rep.case[0], rep.j, rep.delta, *rep.coefficients,
                     *rep.column_residuals, rep.max_residual, "pass" if passed else "fail"])
    _emit(_table(columns, rows, args.format, "expand"), args.output)
    return 0 if ok else 1


def cmd_curved_scan(args) -> int:
    lo, hi, _ = args.chi
    if not (0 < lo and hi < math.pi):
        raise UsageError(f"chi range must lie strictly inside (0, pi), got [{lo}, {hi}]")
    params = CurvedRadialParams(args.epsilon, args.mass, args.J)
    rows = scan(params, grid_values(args.chi))
    columns = ["chi", "gap", "gap_analytic", "tan_half_chi", "dynamical_residual"]
    table = [[r.chi, r.gap, r.gap_analytic, r.tan_half_chi, r.dynamical_residual] for r in rows]
    _emit(_table(columns, table, args.format, "curved-scan"), args.output)
    return 0


COMMANDS = {"eval": cmd_eval, "certify": cmd_certify, "expand": cmd_expand,
            "curved-scan": cmd_curved_scan}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _expand_config(argv)
        args = parser.parse_args(argv)
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be >= 1")
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # argparse: --help exits 0, bad usage exits 2
        return int(exc.code) if isinstance(exc.code, int) else 2
    except (UsageError, DKWavesError) as exc:
        print(f"dkwaves: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
