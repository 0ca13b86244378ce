"""Effective-frequency self-consistency problems.

Zero temperature: ``wbar = omega * sqrt(B(2 g wbar**(m-1) / omega**(2m)))``.

Finite temperature: ``w = omega * sqrt(B(2**m g / (tau**(m-1) omega**(2m))))``
together with ``tau = beta / n_c`` and ``n_c = (beta w / 2) coth(beta w / 2)``.
Eliminating ``tau`` gives a scalar equation in ``w``, which is what
:func:`solve_thermal` solves.

Both maps are contractions (their slope at the fixed point is
``(m - 1) * alpha_1 / 2 < 1/2``), so plain fixed-point iteration is the
primary solver and bracketed root finding the fallback.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .quadrature import OscillatorParams, big_b, big_b_taylor
from .series import (
    DEFAULT_ORDER,
    BetaPolynomial,
    CoefficientSeries,
    binomial_series_coefficients,
    power_coefficient,
    series_exp,
)

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-12
SINGULAR_TOL = 1e-10
_MAX_ITER = 300


class SolverError(RuntimeError):
    """A self-consistency equation could not be solved."""


class SingularDenominatorError(SolverError):
    """``1 - alpha_1 (m - 1) / 2`` vanished in the frequency recursion."""


@dataclass(frozen=True)
class FrequencySolution:
    omega_bar: float
    x0: float
    tau_bar: float
    b_derivs: list[float] = field(default_factory=list)
    omega_coeffs: list[float] = field(default_factory=list)
    iterations: int = 0
    residual: float = 0.0

    @property
    def alphas(self) -> list[float]:
        """``alpha_n = B_n x0**n / (n! B_0)`` for ``n = 0..len(b_derivs)-1``."""
        b0 = self.b_derivs[0]
        return [
            b * self.x0**n / (math.factorial(n) * b0) for n, b in enumerate(self.b_derivs)
        ]


@dataclass(frozen=True)
class ThermalSolution:
    beta: float
    n_c: float
    tau_c: float
    omega_g_beta: float
    residual: float = 0.0

    @property
    def y(self) -> float:
        return math.exp(-self.beta * self.omega_g_beta)


def _fixed_point(func, start: float, scale: float) -> tuple[float, int] | None:
    w = start
    for it in range(1, _MAX_ITER + 1):
        w_new = func(w)
        if not math.isfinite(w_new):
            return None
        if abs(w_new - w) <= 1e-15 * scale * max(1.0, w / scale):
            return w_new, it
        w = w_new
    return None


def _bracketed(residual, lo: float) -> float:
    hi = 2.0 * lo
    for _ in range(200):
        if residual(hi) > 0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise SolverError("could not bracket the effective frequency")
    return optimize.brentq(residual, lo, hi, xtol=1e-15 * hi, rtol=1e-15, maxiter=500)


def _solve(func, omega: float, what: str) -> tuple[float, int]:
    res = _fixed_point(func, omega, omega)
    if res is None:
        log.warning("%s: fixed-point iteration stalled, falling back to bisection", what)
        w = _bracketed(lambda w: w - func(w), omega)
        res = (w, -1)
    w, it = res
    resid = abs(w - func(w)) / w
    if resid > RESIDUAL_TOL:
        raise SolverError(f"{what}: relative residual {resid:.3e} after {it} iterations")
    return w, it


def solve_omega_bar(params: OscillatorParams, order: int = DEFAULT_ORDER) -> FrequencySolution:
    """Zero-temperature effective frequency plus the data needed for its ``y``-expansion.

    Args:
        params: oscillator parameters.
        order: number of expansion coefficients ``omega_1..omega_order`` (and
            ``B`` derivatives) to compute.
    """
    omega, m = params.omega, params.m
    if params.g == 0.0:
        w, it = omega, 0
    else:
        w, it = _solve(lambda w: omega * math.sqrt(big_b(m, params.x_argument(w))), omega, "omega_bar")
    x0 = params.x_argument(w)
    taylor = big_b_taylor(m, x0, order)
    b_derivs = [float(t * math.factorial(n)) for n, t in enumerate(taylor)]
    resid = abs(w - omega * math.sqrt(taylor[0])) / w
    fs = FrequencySolution(
        omega_bar=w,
        x0=x0,
        tau_bar=2.0 / w,
        b_derivs=b_derivs,
        iterations=it,
        residual=resid,
    )
    coeffs = omega_coefficients(fs, params, order)
    return FrequencySolution(
        omega_bar=w,
        x0=x0,
        tau_bar=2.0 / w,
        b_derivs=b_derivs,
        omega_coeffs=coeffs,
        iterations=it,
        residual=resid,
    )


def _coth(z: float) -> float:
    return 1.0 / math.tanh(z) if z < 20.0 else 1.0 + 2.0 * math.exp(-2.0 * z) / (1.0 - math.exp(-2.0 * z))


def thermal_x_argument(params: OscillatorParams, beta: float, w: float) -> float:
    """``2**m g / (tau**(m-1) omega**(2m))`` with ``tau = 2 tanh(beta w / 2) / w``."""
    return params.x_argument(w) * _coth(0.5 * beta * w) ** (params.m - 1)


def solve_thermal(params: OscillatorParams, beta: float) -> ThermalSolution:
    """Finite-temperature effective frequency and the stationary index ``n_c(beta)``."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    omega, m = params.omega, params.m
    if params.g == 0.0:
        w = omega
    else:
        w, _ = _solve(
            lambda w: omega * math.sqrt(big_b(m, thermal_x_argument(params, beta, w))),
            omega,
            f"thermal(beta={beta})",
        )
    z = 0.5 * beta * w
    n_c = z * _coth(z)
    tau_c = beta / n_c
    resid = abs(n_c - 0.5 * beta * w * _coth(0.5 * beta * w)) / n_c
    return ThermalSolution(beta=beta, n_c=n_c, tau_c=tau_c, omega_g_beta=w, residual=resid)


def omega_coefficients(fs: FrequencySolution, params: OscillatorParams, n_max: int) -> list[float]:
    """Coefficients ``omega_1..omega_n_max`` of ``w = wbar + sum_n omega_n y**n``, ``y = exp(-beta w)``.

    Order-by-order recursion obtained by inserting the expansion into
    ``w = omega sqrt(B(x0 (w/wbar)**(m-1) coth**(m-1)))`` with
    ``coth = 1 + 2 sum y**n``:

    * ``a_n``: coefficients of ``(w / wbar) coth - 1``;
    * ``b_n``: coefficients of ``((w / wbar) coth)**(m-1) - 1`` (``T_n`` holds
      the part nonlinear in ``a``);
    * ``c_n``: coefficients of ``B / B_0 - 1`` (``U_n`` the part nonlinear in ``b``);
    * ``sqrt(1 + c)`` closes the loop (``V_n`` the part nonlinear in ``c``).

    The ``a_n``, ``b_n``, ``c_n`` terms linear in ``omega_n`` are moved to the
    left, giving the prefactor ``A = wbar / (1 - alpha_1 (m - 1) / 2)``.
    """
    m = params.m
    wbar = fs.omega_bar
    if len(fs.b_derivs) < n_max + 1:
        raise ValueError(f"need B derivatives up to order {n_max}")
    alpha = fs.alphas
    if fs.x0 == 0.0:
        return [0.0] * n_max
    denom = 1.0 - alpha[1] * (m - 1) / 2.0
    if abs(denom) < SINGULAR_TOL:
        raise SingularDenominatorError(f"1 - alpha_1 (m-1)/2 = {denom:.3e}")
    big_a = wbar / denom
    binom = binomial_series_coefficients(0.5, n_max)

    omega_n = [0.0] * (n_max + 1)
    a = [0.0] * (n_max + 1)
    b = [0.0] * (n_max + 1)
    c = [0.0] * (n_max + 1)
    for n in range(1, n_max + 1):
        s_n = 1.0 + sum(omega_n[k] / wbar for k in range(1, n))
        t_n = sum(math.comb(m - 1, k) * power_coefficient(a, k, n) for k in range(2, m))
        u_n = 0.5 * sum(alpha[k] * power_coefficient(b, k, n) for k in range(2, n + 1))
        v_n = sum(binom[k] * power_coefficient(c, k, n) for k in range(2, n + 1))
        omega_n[n] = big_a * (alpha[1] * (m - 1) * s_n + 0.5 * alpha[1] * t_n + u_n + v_n)
        a[n] = omega_n[n] / wbar + 2.0 * s_n
        b[n] = (m - 1) * a[n] + t_n
        c[n] = alpha[1] * b[n] + 2.0 * u_n
    return omega_n[1:]


def delta_omega_series(omega_coeffs, order: int = DEFAULT_ORDER) -> CoefficientSeries:
    """``w - wbar`` as a series in ``y0 = exp(-beta wbar)``.

    Solves ``d = sum_n omega_n y0**n exp(-n beta d)`` by iteration; each pass
    fixes one more order, so ``order`` passes are exact to the truncation.
    """
    if len(omega_coeffs) < order:
        raise ValueError(f"need {order} omega coefficients, got {len(omega_coeffs)}")
    coeffs = list(omega_coeffs[:order])
    y0 = CoefficientSeries.variable(order)
    d = CoefficientSeries.zeros(order)
    for _ in range(order):
        u = y0 * series_exp(-d.times_beta())
        acc = CoefficientSeries.constant(coeffs[-1], order)
        for w_n in reversed(coeffs[:-1]):
            acc = acc * u + w_n
        d = acc * u
    return d


def q_polynomials(omega_coeffs, n_max: int, order: int | None = None) -> list[BetaPolynomial]:
    """``Q_1(beta)..Q_n_max(beta)``, the ``y0`` coefficients of ``w - wbar``."""
    order = n_max if order is None else order
    d = delta_omega_series(omega_coeffs, order)
    return d.terms[:n_max]


__all__ = [
    "FrequencySolution",
    "SingularDenominatorError",
    "SolverError",
    "ThermalSolution",
    "delta_omega_series",
    "omega_coefficients",
    "q_polynomials",
    "solve_omega_bar",
    "solve_thermal",
    "thermal_x_argument",
]
