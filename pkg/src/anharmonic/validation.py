"""Acceptance criteria, runnable from the CLI (``validate``) and from pytest.

Each criterion returns a :class:`CriterionResult`; tolerances are fixed here.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import crosscheck
from .frequency import q_polynomials, solve_omega_bar
from .oracle import exact_levels, grid_levels_richardson
from .partition import ground_energy, model_partition
from .quadrature import OscillatorParams, moment, potential_integral_bar
from .spectrum import expand, extract_spectrum, series_z_consistency

DEGRADED_ORACLE_TOL = 1e-6
ACCURACY_LIMITS = {2: 0.05, 3: 0.08, 4: 0.12}
ACCURACY_GRID = (0.2, 1.0, 5.0, 50.0, 500.0)
FIGURE_NAMES = {2: "quartic", 3: "sextic", 4: "octic"}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:>2} {self.name:<32} {self.seconds:7.2f}s  {self.detail}"


def _timed(number, name):
    def deco(fn):
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            passed, detail, data = fn(*args, **kwargs)
            return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0, data)

        run.number = number
        run.criterion_name = name
        return run

    return deco


@_timed(1, "harmonic exactness")
def harmonic_exactness():
    t0 = time.perf_counter()
    worst_level = 0.0
    worst_z = 0.0
    for omega in (0.5, 1.0, 2.0):
        params = OscillatorParams(omega, 0.0, 2)
        res = extract_spectrum(params)
        for n, e in enumerate(res.levels):
            worst_level = max(worst_level, abs(e - (n + 0.5) * omega) / ((n + 0.5) * omega))
        for bw in np.geomspace(0.1, 50.0, 12):
            beta = bw / omega
            z = model_partition(params, beta).z_value
            exact = 1.0 / (2.0 * math.sinh(0.5 * bw))
            worst_z = max(worst_z, abs(z - exact) / exact)
    elapsed = time.perf_counter() - t0
    ok = worst_level <= 1e-10 and worst_z <= 1e-10 and elapsed < 1.0
    return ok, f"max level err {worst_level:.1e}, max Z err {worst_z:.1e}, {elapsed:.2f}s (<1s)", {}


@_timed(2, "Q-polynomial identities")
def q_polynomial_identities(seed: int = 20240607):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(3):
        w = rng.uniform(-1.0, 1.0, 5)
        generic = q_polynomials(list(w), 5)
        listed = crosscheck.q_polynomials_listed(*w)
        for poly, ref in zip(generic, listed):
            for k, c in enumerate(ref):
                worst = max(worst, abs(poly[k] - c) / max(1.0, abs(c)))
            if poly.degree > len(ref) - 1:
                worst = max(worst, max(abs(poly[k]) for k in range(len(ref), poly.degree + 1)))
    return worst <= 1e-12, f"max coefficient err {worst:.1e} (tol 1e-12)", {}


@_timed(3, "series/direct Z consistency")
def series_consistency(ms=(2, 3, 4), gs=(0.1, 1.0, 10.0), order: int = 12):
    t0 = time.perf_counter()
    worst_ratio = 0.0
    worst_gap = 0.0
    for m in ms:
        for g in gs:
            params = OscillatorParams(1.0, g, m)
            ex = expand(params, order)
            wbar = ex.frequency.omega_bar
            for bw in (3.0, 5.0, 8.0):
                gap = series_z_consistency(params, bw / wbar, order, ex)
                tol = max(1e-6, 10.0 * math.exp(-bw * (order + 1)))
                worst_gap = max(worst_gap, gap)
                worst_ratio = max(worst_ratio, gap / tol)
    elapsed = time.perf_counter() - t0
    ok = worst_ratio <= 1.0 and elapsed < 30.0
    return ok, f"max gap {worst_gap:.1e} (tol 1e-6), {elapsed:.1f}s (<30s)", {}


@_timed(4, "explicit-formula equivalence")
def explicit_formula_equivalence(n_max: int = 6):
    worst = {"dR_n0": 0.0, "dR_n1": 0.0, "dA_n0": 0.0, "P_n1": 0.0}

    def err(a, b):
        return abs(a - b) / max(1.0, abs(b))

    for m in (2, 3, 4):
        for g in (0.5, 5.0):
            ex = expand(OscillatorParams(1.0, g, m), 12)
            fs = ex.frequency
            w = [0.0] + list(fs.omega_coeffs)
            b = ex.bundle
            assembled = crosscheck.p_n1_assembled(w, fs.omega_bar, ex.log_bar, ex.v_moments, n_max)
            for n in range(1, n_max + 1):
                worst["dR_n0"] = max(worst["dR_n0"], err(crosscheck.delta_r_n0(n), b.d_r.coefficient(n, 0)))
                worst["dR_n1"] = max(worst["dR_n1"], err(crosscheck.delta_r_n1(w, n), b.d_r.coefficient(n, 1)))
                worst["dA_n0"] = max(
                    worst["dA_n0"], err(crosscheck.delta_a_n0(w, fs.omega_bar, n), b.d_a.coefficient(n, 0))
                )
                worst["P_n1"] = max(worst["P_n1"], err(assembled[n - 1], b.p.coefficient(n, 1)))
    ok = all(v <= 1e-9 for v in worst.values())
    return ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + " (tol 1e-9)", worst


@_timed(5, "oracle self-convergence")
def oracle_convergence():
    t0 = time.perf_counter()
    worst = 0.0
    unconverged = []
    for m in (2, 3, 4):
        for g in (0.1, 1.0, 10.0, 100.0):
            o = exact_levels(OscillatorParams(1.0, g, m), 9, 1e-9)
            worst = max(worst, o.drift)
            if not o.converged:
                unconverged.append((m, g))
    params = OscillatorParams(1.0, 1.0, 2)
    e_basis = exact_levels(params, 1, 1e-9).eigenvalues[0]
    e_grid = float(grid_levels_richardson(params, 1)[0])
    grid_err = abs(e_basis - e_grid) / e_grid
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and not unconverged and grid_err <= 1e-7 and elapsed < 120.0
    return ok, f"max drift {worst:.1e}, grid E0 err {grid_err:.1e}, {elapsed:.1f}s", {}


def level_errors(m: int, g: float, n_max: int = 8, oracle_tol: float = 1e-9, omega: float = 1.0):
    params = OscillatorParams(omega, g, m)
    model = extract_spectrum(params, n_max)
    exact = exact_levels(params, n_max + 1, oracle_tol)
    errs = [abs(a - b) / abs(b) for a, b in zip(model.levels, exact.eigenvalues)]
    return errs, model, exact


@_timed(6, "model-vs-oracle accuracy")
def model_accuracy(oracle_tol: float = 1e-9, gs=ACCURACY_GRID):
    errs = {m: {g: level_errors(m, g, 8, oracle_tol)[0] for g in gs} for m in (2, 3, 4)}
    maxima = {m: max(max(v) for v in errs[m].values()) for m in errs}
    within = all(maxima[m] <= ACCURACY_LIMITS[m] for m in maxima)
    ordered = all(
        errs[2][g][n] <= errs[3][g][n] <= errs[4][g][n] for g in gs for n in range(9)
    )
    detail = ", ".join(
        f"m={m} max {100 * maxima[m]:.2f}% (<= {100 * ACCURACY_LIMITS[m]:.0f}%)" for m in maxima
    )
    detail += f", error increasing in m: {ordered}"
    return within and ordered, detail, {"maxima": maxima, "errors": errs}


@_timed(7, "ground-state accuracy")
def ground_state_accuracy(oracle_tol: float = 1e-9):
    worst = 0.0
    for g in np.geomspace(0.1, 1e3, 20):
        params = OscillatorParams(1.0, float(g), 2)
        e0 = ground_energy(params)
        ref = exact_levels(params, 1, oracle_tol).eigenvalues[0]
        worst = max(worst, abs(e0 - ref) / ref)
    return worst <= 0.05, f"max rel err {100 * worst:.2f}% (<= 5%)", {"max": worst}


def log_log_slope(gs, values) -> float:
    return float(np.polyfit(np.log(gs), np.log(values), 1)[0])


@_timed(8, "strong-coupling scaling")
def strong_coupling_scaling():
    gs = np.geomspace(1e3, 1e6, 7)
    parts = []
    ok = True
    slopes = {}
    for m in (2, 3, 4):
        target = 1.0 / (m + 1)
        wb, e0 = [], []
        for g in gs:
            params = OscillatorParams(1.0, float(g), m)
            fs = solve_omega_bar(params, order=1)
            wb.append(fs.omega_bar)
            e0.append(ground_energy(params, fs))
        s_w = log_log_slope(gs, wb)
        s_e = log_log_slope(gs, e0)
        slopes[m] = (s_w, s_e)
        dev = max(abs(s_w - target), abs(s_e - target)) / target
        ok &= dev <= 0.01
        parts.append(f"m={m} slopes {s_w:.4f}/{s_e:.4f} vs {target:.4f}")
    return ok, "; ".join(parts), {"slopes": slopes}


@_timed(9, "moment identity")
def moment_identity(seed: int = 7, count: int = 20):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        m = int(rng.integers(2, 5))
        omega = float(rng.uniform(0.3, 3.0))
        g = float(10 ** rng.uniform(-2, 3))
        params = OscillatorParams(omega, g, m)
        wbar = solve_omega_bar(params, order=1).omega_bar
        direct = potential_integral_bar(params, wbar)
        via = math.sqrt(wbar) / omega * moment(m, params.x_argument(wbar), 0)
        worst = max(worst, abs(direct - via) / via)
    return worst <= 1e-11, f"max rel diff {worst:.1e} (tol 1e-11)", {}


@_timed(10, "figure reproduction")
def figure_reproduction(oracle_tol: float = 1e-9, points: int = 40, workers: int | None = None):
    from .cli import figure_table

    t0 = time.perf_counter()
    maxima = {}
    for m in (2, 3, 4):
        rows, _ = figure_table(m, 1.0, 1e-2, 1e3, points, 8, 12, oracle_tol, workers)
        worst = 0.0
        for row in rows:
            for n in range(9):
                model, exact = row[f"E{n}_model"], row[f"E{n}_exact"]
                worst = max(worst, abs(model - exact) / abs(exact))
        maxima[m] = worst
    elapsed = time.perf_counter() - t0
    ok = all(maxima[m] <= ACCURACY_LIMITS[m] for m in maxima) and elapsed < 600.0
    detail = ", ".join(f"m={m} max {100 * v:.2f}%" for m, v in maxima.items()) + f", {elapsed:.0f}s"
    return ok, detail, {"maxima": maxima}


ALL_CRITERIA = (
    harmonic_exactness,
    q_polynomial_identities,
    series_consistency,
    explicit_formula_equivalence,
    oracle_convergence,
    model_accuracy,
    ground_state_accuracy,
    strong_coupling_scaling,
    moment_identity,
    figure_reproduction,
)

_USES_ORACLE_TOL = {model_accuracy, ground_state_accuracy, figure_reproduction}


def run_suite(quick: bool = False, oracle_tol: float = 1e-9, report=print) -> list[CriterionResult]:
    """Run the acceptance criteria and report one line per criterion.

    ``quick`` runs only the harmonic limit, the Q-polynomial identities and
    the quartic part of the series consistency check.
    """
    if oracle_tol > DEGRADED_ORACLE_TOL:
        report(f"WARNING: degraded oracle (oracle tolerance {oracle_tol:g} > {DEGRADED_ORACLE_TOL:g})")
    results = []
    if quick:
        runs = [harmonic_exactness, q_polynomial_identities, lambda: series_consistency(ms=(2,))]
    else:
        runs = [
            (lambda c=c: c(oracle_tol=oracle_tol)) if c in _USES_ORACLE_TOL else c
            for c in ALL_CRITERIA
        ]
    for run in runs:
        res = run()
        results.append(res)
        report(res.line())
    return results


__all__ = [
    "ACCURACY_LIMITS",
    "ALL_CRITERIA",
    "CriterionResult",
    "level_errors",
    "run_suite",
]
