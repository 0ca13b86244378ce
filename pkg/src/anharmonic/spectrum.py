"""Low-temperature expansion of the model partition function and the level prescription.

With ``y0 = exp(-beta wbar)`` the model partition function takes the form::

    Z = exp(-beta E_0) * P,   P = exp(beta S) * (1 + dR) = 1 + sum_n P_n(beta) y0**n

where ``P_n`` is a polynomial of degree ``n`` in ``beta``.  The level ``n`` is
defined by promoting the linear coefficient ``P_n1`` into the exponent::

    E_n = E_0 + n wbar - P_n1

All intermediate quantities are :class:`~anharmonic.series.CoefficientSeries`
built with the generic series operations:

``d_omega``  ``w - wbar``
``d_r``      ``(coth(beta w / 2) - 1) / 2 = y / (1 - y)`` with ``y = y0 exp(-beta d_omega)``
``d_a``      ``ln sqrt(w / (pi coth)) - ln sqrt(wbar / pi)``
``d_tau``    ``tau_c - 2 / wbar``
``d_b``      ``ln I_g(beta) - ln Ibar_g``
``d_t``      ``d_a + d_b``
``s``        the exponent ``S`` (seven-term combination of the above)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .frequency import FrequencySolution, delta_omega_series, solve_omega_bar
from .partition import log_zero_temperature_factor, model_partition
from .quadrature import OscillatorParams, v_moment
from .series import (
    DEFAULT_ORDER,
    CoefficientSeries,
    series_exp,
    series_log1p,
    series_recip,
)

DEFAULT_N_MAX = 8


@dataclass(frozen=True)
class SeriesBundle:
    d_omega: CoefficientSeries
    d_r: CoefficientSeries
    d_a: CoefficientSeries
    d_b: CoefficientSeries
    d_t: CoefficientSeries
    s: CoefficientSeries
    p: CoefficientSeries
    c: tuple[float, ...]
    d_tau: CoefficientSeries


@dataclass(frozen=True)
class SpectrumResult:
    params: OscillatorParams
    e0: float
    omega_bar: float
    p_n1: list[float]
    levels: list[float]
    truncation_order: int

    @property
    def n_max(self) -> int:
        return len(self.levels) - 1


@dataclass(frozen=True)
class SeriesExpansion:
    """Everything needed to rebuild ``Z`` as a series for one parameter set."""

    params: OscillatorParams
    frequency: FrequencySolution
    log_bar: float
    e0: float
    v_moments: list[float]
    bundle: SeriesBundle

    @property
    def order(self) -> int:
        return self.bundle.p.order

    def z_series(self, beta: float) -> float:
        y0 = math.exp(-beta * self.frequency.omega_bar)
        return math.exp(-beta * self.e0) * self.bundle.p.evaluate(beta, y0)

    def log_z_series(self, beta: float) -> float:
        y0 = math.exp(-beta * self.frequency.omega_bar)
        return -beta * self.e0 + math.log(self.bundle.p.evaluate(beta, y0))


def build_delta_r(d_omega: CoefficientSeries) -> CoefficientSeries:
    """``sum_n y**n`` with ``y = y0 exp(-beta d_omega)``."""
    order = d_omega.order
    y = CoefficientSeries.variable(order) * series_exp(-d_omega.times_beta())
    return y * series_recip(1.0 - y)


def build_delta_t(
    fs: FrequencySolution,
    d_omega: CoefficientSeries,
    d_r: CoefficientSeries,
    v_moments,
) -> tuple[CoefficientSeries, CoefficientSeries, CoefficientSeries]:
    """Return ``(d_a, d_b, d_tau)``; ``d_t = d_a + d_b``.

    ``v_moments[k]`` must hold ``int V**k exp(-tau_bar V) dx`` for
    ``k = 0..order``.
    """
    order = d_omega.order
    if len(v_moments) < order + 1:
        raise ValueError(f"need {order + 1} V-moments, got {len(v_moments)}")
    q = d_omega / fs.omega_bar
    two_r = 2.0 * d_r
    d_a = 0.5 * (series_log1p(q) - series_log1p(two_r))

    # tau_c = 2 / (w coth) = tau_bar / ((1 + q)(1 + 2 dR))
    d_tau = fs.tau_bar * (series_recip((1.0 + q) * (1.0 + two_r)) - 1.0)

    # I_g(tau_bar + d) / Ibar_g = 1 + sum_k (-d)^k Ibar_k / (k! Ibar_0)
    i0 = v_moments[0]
    ratio = CoefficientSeries.zeros(order)
    power = CoefficientSeries.constant(1.0, order)
    for k in range(1, order + 1):
        power = power * (-d_tau)
        ratio = ratio + power * (v_moments[k] / (math.factorial(k) * i0))
    d_b = series_log1p(ratio)
    return d_a, d_b, d_tau


def s_coefficients(omega_bar: float, log_bar: float) -> tuple[float, ...]:
    """``c_1..c_7`` of ``S``; ``log_bar = ln(sqrt(wbar / pi) Ibar_g)``."""
    return (
        0.5 * (log_bar - 1.0),
        0.5 * omega_bar,
        omega_bar * log_bar,
        0.5,
        log_bar,
        omega_bar,
        1.0,
    )


def build_s_and_p(
    fs: FrequencySolution,
    d_omega: CoefficientSeries,
    d_t: CoefficientSeries,
    d_r: CoefficientSeries,
    log_bar: float,
) -> tuple[CoefficientSeries, CoefficientSeries, tuple[float, ...]]:
    """``S``, ``P = exp(beta S)(1 + d_r)`` and the coefficients of ``S``."""
    c = s_coefficients(fs.omega_bar, log_bar)
    dw_dt = d_omega * d_t
    s = (
        c[0] * d_omega
        + c[1] * d_t
        + c[2] * d_r
        + c[3] * dw_dt
        + c[4] * (d_omega * d_r)
        + c[5] * (d_t * d_r)
        + c[6] * (dw_dt * d_r)
    )
    p = series_exp(s.times_beta()) * (1.0 + d_r)
    return s, p, c


def expand(
    params: OscillatorParams,
    order: int = DEFAULT_ORDER,
    fs: FrequencySolution | None = None,
) -> SeriesExpansion:
    """Build the full ``y0``-expansion of the model partition function."""
    if fs is None or len(fs.omega_coeffs) < order:
        fs = solve_omega_bar(params, order)
    log_bar = log_zero_temperature_factor(params, fs.omega_bar)
    e0 = 0.5 * fs.omega_bar * (1.0 - log_bar)
    v_moments = [v_moment(params, fs.tau_bar, k) for k in range(order + 1)]

    d_omega = delta_omega_series(fs.omega_coeffs, order)
    d_r = build_delta_r(d_omega)
    d_a, d_b, d_tau = build_delta_t(fs, d_omega, d_r, v_moments)
    d_t = d_a + d_b
    s, p, c = build_s_and_p(fs, d_omega, d_t, d_r, log_bar)
    bundle = SeriesBundle(
        d_omega=d_omega, d_r=d_r, d_a=d_a, d_b=d_b, d_t=d_t, s=s, p=p, c=c, d_tau=d_tau
    )
    return SeriesExpansion(params, fs, log_bar, e0, v_moments, bundle)


def levels_from_expansion(exp: SeriesExpansion, n_max: int) -> SpectrumResult:
    if n_max > exp.order:
        raise ValueError(f"n_max={n_max} exceeds truncation order {exp.order}")
    wbar = exp.frequency.omega_bar
    p_n1 = [exp.bundle.p.coefficient(n, 1) for n in range(1, n_max + 1)]
    levels = [exp.e0] + [exp.e0 + n * wbar - p_n1[n - 1] for n in range(1, n_max + 1)]
    return SpectrumResult(
        params=exp.params,
        e0=exp.e0,
        omega_bar=wbar,
        p_n1=p_n1,
        levels=levels,
        truncation_order=exp.order,
    )


def extract_spectrum(
    params: OscillatorParams, n_max: int = DEFAULT_N_MAX, order: int = DEFAULT_ORDER
) -> SpectrumResult:
    """Model levels ``E_0..E_n_max``.

    ``P_n1`` only involves series coefficients up to order ``n``; the
    truncation must exceed ``n_max`` and the default leaves headroom.
    """
    if order < n_max + 1:
        raise ValueError(f"truncation order {order} must be >= n_max + 1 = {n_max + 1}")
    return levels_from_expansion(expand(params, order), n_max)


def series_z_consistency(
    params: OscillatorParams,
    beta: float,
    order: int = DEFAULT_ORDER,
    expansion: SeriesExpansion | None = None,
) -> float:
    """Relative gap between the truncated series for ``Z`` and the direct closed form."""
    if expansion is None:
        expansion = expand(params, order)
    direct = model_partition(params, beta).log_z
    series = expansion.log_z_series(beta)
    return abs(math.expm1(series - direct))


__all__ = [
    "DEFAULT_N_MAX",
    "SeriesBundle",
    "SeriesExpansion",
    "SpectrumResult",
    "build_delta_r",
    "build_delta_t",
    "build_s_and_p",
    "expand",
    "extract_spectrum",
    "levels_from_expansion",
    "s_coefficients",
    "series_z_consistency",
]
