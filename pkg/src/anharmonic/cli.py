"""Command-line front end.

Subcommands::

    spectrum   model and oracle levels for one coupling
    sweep      the same over a log-spaced coupling grid
    zeval      model partition function over a beta grid
    figure     level-vs-coupling tables (one CSV per anharmonicity)
    validate   acceptance suite with a pass/fail table

Tabular output is CSV with ``#`` metadata lines, or JSON (an array of row
objects with the same keys in the same order).  The number of worker
processes defaults to ``$ANHARMONIC_WORKERS`` (else the CPU count, capped at 8).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .frequency import SolverError
from .oracle import exact_levels
from .partition import ground_energy, model_partition
from .quadrature import OscillatorParams, QuadratureError
from .spectrum import extract_spectrum

log = logging.getLogger(__name__)

SPECTRUM_COLUMNS = ("m", "g", "omega", "n", "E_model", "E_oracle", "rel_err")
ZEVAL_COLUMNS = ("beta", "Z", "free_energy", "n_c", "tau_c", "omega_g")
FIGURE_NAMES = {2: "quartic", 3: "sextic", 4: "octic"}
WORKERS_ENV = "ANHARMONIC_WORKERS"


class GridSpec(tuple):
    """``(start, stop, count)`` for a log-spaced grid."""

    def values(self) -> list[float]:
        start, stop, count = self
        if count == 1:
            return [float(start)]
        return [float(v) for v in np.geomspace(start, stop, int(count))]


def _grid(text_values) -> GridSpec:
    start, stop, count = float(text_values[0]), float(text_values[1]), int(float(text_values[2]))
    if count < 1:
        raise argparse.ArgumentTypeError("grid count must be >= 1")
    if start > stop:
        raise argparse.ArgumentTypeError("grid start must be <= stop")
    if start <= 0:
        raise argparse.ArgumentTypeError("log-spaced grids need a positive start")
    return GridSpec((start, stop, count))


@dataclass
class RunConfig:
    command: str
    m: list[int]
    omega: float = 1.0
    g: float | GridSpec | None = None
    n_max: int = 8
    beta: float | GridSpec | None = None
    truncation: int = 12
    oracle_tol: float = 1e-9
    output: str = "-"
    format: str = "csv"
    workers: int = 1
    quick: bool = False


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


def _map(func, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(it) for it in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items))


# -- computations -----------------------------------------------------------


def spectrum_point(args) -> dict:
    """Model and oracle levels at one parameter set; never raises."""
    m, omega, g, n_max, truncation, oracle_tol = args
    out = {"m": m, "g": g, "omega": omega, "error": None, "model": None, "exact": None, "basis": 0}
    try:
        params = OscillatorParams(omega, g, m)
        out["model"] = extract_spectrum(params, n_max, truncation).levels
        oracle = exact_levels(params, n_max + 1, oracle_tol)
        out["exact"] = oracle.eigenvalues
        out["basis"] = oracle.basis_size
        if not oracle.converged:
            out["error"] = f"oracle not converged (drift {oracle.drift:.2e} at basis {oracle.basis_size})"
    except (SolverError, QuadratureError, ValueError, ArithmeticError) as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def spectrum_rows(points: list[dict]) -> list[dict]:
    rows = []
    for pt in points:
        if pt["model"] is None or pt["exact"] is None:
            rows.append(dict(m=pt["m"], g=pt["g"], omega=pt["omega"], n=-1,
                             E_model=math.nan, E_oracle=math.nan, rel_err=math.nan))
            continue
        for n, (a, b) in enumerate(zip(pt["model"], pt["exact"])):
            rows.append(dict(m=pt["m"], g=pt["g"], omega=pt["omega"], n=n,
                             E_model=a, E_oracle=b, rel_err=abs(a - b) / abs(b)))
    return rows


def figure_table(m, omega, g_start, g_stop, points, n_max=8, truncation=12, oracle_tol=1e-9, workers=None):
    """Rows ``{g, E0_model.., E0_exact..}`` over a log-spaced coupling grid, plus metadata."""
    workers = default_workers() if workers is None else workers
    gs = GridSpec((g_start, g_stop, points)).values()
    results = _map(spectrum_point, [(m, omega, g, n_max, truncation, oracle_tol) for g in gs], workers)
    rows = []
    errors = []
    for pt in results:
        row = {"g": pt["g"]}
        model = pt["model"] or [math.nan] * (n_max + 1)
        exact = pt["exact"] or [math.nan] * (n_max + 1)
        for n in range(n_max + 1):
            row[f"E{n}_model"] = model[n]
        for n in range(n_max + 1):
            row[f"E{n}_exact"] = exact[n]
        rows.append(row)
        if pt["error"]:
            errors.append(f"g={pt['g']!r}: {pt['error']}")
    meta = {
        "basis": max(pt["basis"] for pt in results),
        "errors": errors,
    }
    return rows, meta


def zeval_rows(params: OscillatorParams, betas) -> list[dict]:
    rows = []
    for beta in betas:
        ev = model_partition(params, beta)
        th = ev.thermal
        rows.append(dict(beta=beta, Z=ev.z_value, free_energy=ev.free_energy,
                         n_c=th.n_c, tau_c=th.tau_c, omega_g=th.omega_g_beta))
    return rows


# -- output -----------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(rows: list[dict], columns, fmt: str, meta_lines=()) -> str:
    if fmt == "json":
        return json.dumps([{c: row[c] for c in columns} for row in rows], indent=1, allow_nan=True) + "\n"
    lines = [f"# {line}" for line in meta_lines]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def emit(text: str, output: str) -> None:
    if output in ("-", ""):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _meta(cfg: RunConfig, extra=()) -> list[str]:
    return [f"anharmonic {__version__} {cfg.command}",
            f"omega={cfg.omega!r} m={','.join(map(str, cfg.m))} n_max={cfg.n_max}",
            f"truncation={cfg.truncation} oracle_tol={cfg.oracle_tol!r}", *extra]


# -- commands ---------------------------------------------------------------


def _spectrum_like(cfg: RunConfig, gs: list[float]) -> int:
    tasks = [(m, cfg.omega, g, cfg.n_max, cfg.truncation, cfg.oracle_tol) for m in cfg.m for g in gs]
    points = _map(spectrum_point, tasks, cfg.workers)
    rows = spectrum_rows(points)
    errors = [f"error m={p['m']} g={p['g']!r}: {p['error']}" for p in points if p["error"]]
    basis = max(p["basis"] for p in points)
    finite = [r["rel_err"] for r in rows if not math.isnan(r["rel_err"])]
    summary = f"max rel_err={max(finite):.6e}" if finite else "no levels computed"
    emit(render(rows, SPECTRUM_COLUMNS, cfg.format,
                _meta(cfg, [f"oracle_basis_size={basis}", summary, *errors])), cfg.output)
    for e in errors:
        print(e, file=sys.stderr)
    return 1 if errors else 0


def cmd_spectrum(cfg: RunConfig) -> int:
    g = cfg.g if cfg.g is not None else 1.0
    gs = g.values() if isinstance(g, GridSpec) else [float(g)]
    return _spectrum_like(cfg, gs)


def cmd_sweep(cfg: RunConfig) -> int:
    g = cfg.g if isinstance(cfg.g, GridSpec) else GridSpec((1e-2, 1e3, 40))
    return _spectrum_like(cfg, g.values())


def cmd_zeval(cfg: RunConfig) -> int:
    beta = cfg.beta if cfg.beta is not None else GridSpec((0.1, 50.0, 20))
    betas = beta.values() if isinstance(beta, GridSpec) else [float(beta)]
    g = float(cfg.g) if cfg.g is not None and not isinstance(cfg.g, GridSpec) else 0.0
    status = 0
    chunks = []
    for m in cfg.m:
        params = OscillatorParams(cfg.omega, g, m)
        try:
            rows = zeval_rows(params, betas)
        except (SolverError, QuadratureError) as exc:
            print(f"error m={m}: {exc}", file=sys.stderr)
            return 1
        n_c = [r["n_c"] for r in rows]
        if any(v < 1.0 for v in n_c) or any(b <= a for a, b in zip(n_c, n_c[1:])):
            print(f"m={m}: n_c not >= 1 and increasing in beta", file=sys.stderr)
            status = 1
        e0 = ground_energy(params)
        chunks.append((m, rows, e0))
    if cfg.format == "json":
        rows = [dict(r, m=m) for m, rs, _ in chunks for r in rs]
        emit(render(rows, ("m",) + ZEVAL_COLUMNS, "json"), cfg.output)
    else:
        rows = [dict(r, m=m) for m, rs, _ in chunks for r in rs]
        extra = [f"g={g!r}"] + [f"E0(m={m})={e0!r}" for m, _, e0 in chunks]
        emit(render(rows, ("m",) + ZEVAL_COLUMNS, "csv", _meta(cfg, extra)), cfg.output)
    return status


def cmd_figure(cfg: RunConfig) -> int:
    out_dir = Path(cfg.output if cfg.output not in ("-", "") else ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    g = cfg.g if isinstance(cfg.g, GridSpec) else GridSpec((1e-2, 1e3, 40))
    status = 0
    for m in cfg.m:
        if m not in FIGURE_NAMES:
            print(f"figure needs m in {{2, 3, 4}}, got {m}", file=sys.stderr)
            return 2
        rows, meta = figure_table(m, cfg.omega, g[0], g[1], int(g[2]), cfg.n_max,
                                  cfg.truncation, cfg.oracle_tol, cfg.workers)
        columns = list(rows[0].keys())
        ext = "json" if cfg.format == "json" else "csv"
        path = out_dir / f"fig_{FIGURE_NAMES[m]}.{ext}"
        gp = [f"gnuplot: set datafile separator ','; set logscale x; "
              f"plot for [i=2:{cfg.n_max + 2}] '{path.name}' using 1:i with points, "
              f"for [i={cfg.n_max + 3}:{2 * cfg.n_max + 3}] '' using 1:i with lines"]
        extra = [f"g_grid={g[0]!r}:{g[1]!r}:{int(g[2])} (log)", f"oracle_basis_size={meta['basis']}",
                 *gp, *meta["errors"]]
        meta_cfg = RunConfig(**{**cfg.__dict__, "m": [m]})
        emit(render(rows, columns, cfg.format, _meta(meta_cfg, extra)), str(path))
        for e in meta["errors"]:
            print(f"m={m} {e}", file=sys.stderr)
            status = 1
        print(path)
    return status


def cmd_validate(cfg: RunConfig) -> int:
    from .validation import run_suite

    results = run_suite(quick=cfg.quick, oracle_tol=cfg.oracle_tol)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "zeval": cmd_zeval,
    "figure": cmd_figure,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anharmonic", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, action="append", help="anharmonicity exponent (repeatable)")
    common.add_argument("--omega", type=float, default=1.0)
    g = common.add_mutually_exclusive_group()
    g.add_argument("--g", type=float, help="coupling constant")
    g.add_argument("--g-grid", nargs=3, metavar=("START", "STOP", "COUNT"), help="log-spaced couplings")
    common.add_argument("--n-max", type=int, default=8)
    b = common.add_mutually_exclusive_group()
    b.add_argument("--beta", type=float)
    b.add_argument("--beta-grid", nargs=3, metavar=("START", "STOP", "COUNT"))
    common.add_argument("--truncation", type=int, default=12)
    common.add_argument("--oracle-tol", type=float, default=1e-9)
    common.add_argument("--output", "-o", default=None)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--workers", type=int, default=None)

    sub.add_parser("spectrum", parents=[common], help="levels at one coupling")
    sub.add_parser("sweep", parents=[common], help="levels over a coupling grid")
    sub.add_parser("zeval", parents=[common], help="partition function over beta")
    sub.add_parser("figure", parents=[common], help="levels-vs-g tables for m = 2, 3, 4")
    v = sub.add_parser("validate", parents=[common], help="run the acceptance suite")
    v.add_argument("--quick", action="store_true")
    return parser


def parse_config(argv=None) -> tuple[RunConfig, argparse.Namespace]:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        g = _grid(ns.g_grid) if ns.g_grid else ns.g
        beta = _grid(ns.beta_grid) if ns.beta_grid else ns.beta
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    if ns.n_max < 0 or ns.truncation < ns.n_max + 1:
        parser.error("need 0 <= n-max < truncation")
    ms = ns.m or ([2, 3, 4] if ns.command == "figure" else [2])
    output = ns.output if ns.output is not None else ("." if ns.command == "figure" else "-")
    cfg = RunConfig(
        command=ns.command,
        m=ms,
        omega=ns.omega,
        g=g,
        n_max=ns.n_max,
        beta=beta,
        truncation=ns.truncation,
        oracle_tol=ns.oracle_tol,
        output=output,
        format=ns.format,
        workers=ns.workers if ns.workers is not None else default_workers(),
        quick=getattr(ns, "quick", False),
    )
    return cfg, ns


def main(argv=None) -> int:
    cfg, ns = parse_config(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    return COMMANDS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
