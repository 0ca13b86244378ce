"""One-dimensional integrals for the potential ``V(x) = omega**2 x**2 / 2 + g x**(2m)``.

Every integrand here is even and log-concave-ish with a single maximum on
``[0, inf)``, so all integrals go through :func:`half_line_integral`.  It
runs adaptive Gauss-Kronrod (QUADPACK) on ``[0, peak]`` and on
``[peak, cutoff]``, where the integrand has dropped by ``e**-45`` at the cutoff.
The peak value is factored out so that high moments neither overflow nor
lose digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

EPSREL = 1e-13
# reported failure threshold; QUADPACK error estimates are pessimistic
FAIL_REL = 1e-11
_DROP = 45.0


class QuadratureError(RuntimeError):
    """An integral could not be computed to the requested accuracy."""


@dataclass(frozen=True)
class OscillatorParams:
    """Physical inputs of ``H = -1/2 d^2/dx^2 + omega^2 x^2 / 2 + g x^(2m)``."""

    omega: float = 1.0
    g: float = 0.0
    m: int = 2

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.g >= 0:
            raise ValueError(f"g must be nonnegative, got {self.g}")
        if int(self.m) != self.m or self.m < 2:
            raise ValueError(f"m must be an integer >= 2, got {self.m}")
        object.__setattr__(self, "m", int(self.m))

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * self.omega**2 * x**2 + self.g * x ** (2 * self.m)

    def x_argument(self, omega_eff: float) -> float:
        """``2 g omega_eff**(m-1) / omega**(2m)``, the argument of ``B`` at zero temperature."""
        return 2.0 * self.g * omega_eff ** (self.m - 1) / self.omega ** (2 * self.m)


@dataclass(frozen=True)
class MomentTable:
    """Even moments ``M_k(x) = int y^k exp(-y^2 - x y^(2m)) dy`` at one ``x``."""

    m: int
    x: float
    values: dict[int, float] = field(default_factory=dict)

    def __getitem__(self, k: int) -> float:
        if k % 2:
            return 0.0
        return self.values[k]


def half_line_integral(log_f, peak: float, width: float) -> float:
    """``int_0^inf exp(log_f(t)) dt`` for a unimodal integrand peaked at ``peak``.

    Args:
        log_f: scalar log-integrand, may return ``-inf``.
        peak: location of the maximum on ``[0, inf)``.
        width: rough scale on which the integrand varies near the peak.
    """
    h0 = log_f(peak)
    if not math.isfinite(h0):
        raise QuadratureError(f"integrand not finite at its peak t={peak}")
    hi = peak + 4.0 * width
    for _ in range(200):
        if log_f(hi) - h0 < -_DROP:
            break
        hi = peak + 2.0 * (hi - peak)
    else:
        raise QuadratureError("integrand does not decay")

    def f(t):
        v = log_f(t) - h0
        return math.exp(v) if v > -745.0 else 0.0

    total = 0.0
    abserr = 0.0
    pieces = [(0.0, peak), (peak, hi)] if peak > 0 else [(0.0, hi)]
    for a, b in pieces:
        val, err, info = integrate.quad(
            f, a, b, epsabs=0.0, epsrel=EPSREL, limit=400, full_output=1
        )[:3]
        total += val
        abserr += err
    if not total > 0 or abserr > FAIL_REL * total:
        raise QuadratureError(
            f"quadrature failed: value={total!r}, error estimate={abserr!r}"
        )
    return math.exp(h0) * total


def _moment_log(m: int, x: float, k: int):
    p = 2 * m

    def log_f(t):
        if t <= 0.0:
            return 0.0 if k == 0 else -math.inf
        return k * math.log(t) - t * t - x * t**p

    return log_f


def _moment_peak(m: int, x: float, k: int) -> tuple[float, float]:
    p = 2 * m
    if k == 0:
        width = 1.0 if x <= 1.0 else x ** (-1.0 / p)
        return 0.0, width
    hi = math.sqrt(k / 2.0)
    t = optimize.brentq(lambda t: 2 * t * t + p * x * t**p - k, 0.0, hi, xtol=1e-15, rtol=1e-15)
    curv = k / t**2 + 2.0 + p * (p - 1) * x * t ** (p - 2)
    return t, 1.0 / math.sqrt(curv)


def moment(m: int, x: float, k: int) -> float:
    """``M_k(x) = int_{-inf}^{inf} y^k exp(-y^2 - x y^(2m)) dy`` for even ``k``."""
    if x < 0:
        raise ValueError(f"moment needs x >= 0, got {x}")
    if k < 0 or k % 2:
        raise ValueError(f"moment needs an even k >= 0, got {k}")
    if x == 0.0:
        return math.gamma((k + 1) / 2.0)
    peak, width = _moment_peak(m, x, k)
    return 2.0 * half_line_integral(_moment_log(m, x, k), peak, width)


def moment_hermite(m: int, x: float, k: int, nodes: int = 200) -> float:
    """Gauss-Hermite evaluation of :func:`moment`.

    Only trustworthy for small ``x`` and low ``k``; kept as an independent
    scheme for cross-checks.
    """
    y, w = np.polynomial.hermite.hermgauss(nodes)
    return float(np.sum(w * y**k * np.exp(-x * y ** (2 * m))))


def moment_table(m: int, x: float, ks) -> MomentTable:
    return MomentTable(m, x, {int(k): moment(m, x, int(k)) for k in ks})


def big_b(m: int, x: float) -> float:
    """``B(x) = M_0(x) / (2 M_2(x))``; equals 1 at ``x = 0`` and grows like ``x**(1/m)``."""
    if x == 0.0:
        return 1.0
    return moment(m, x, 0) / (2.0 * moment(m, x, 2))


def big_b_taylor(m: int, x0: float, order: int) -> np.ndarray:
    """Taylor coefficients ``B_n / n!`` of ``B`` about ``x0`` for ``n = 0..order``.

    Uses ``dM_k/dx = -M_{k+2m}``, so ``M_k(x0 + s) = sum_n (-s)^n M_{k+2mn}(x0) / n!``,
    followed by formal division of the two moment series (the quotient rule
    to all orders).
    """
    if x0 < 0:
        raise ValueError(f"big_b_taylor needs x0 >= 0, got {x0}")
    p = 2 * m
    num = np.empty(order + 1)
    den = np.empty(order + 1)
    for n in range(order + 1):
        sign = -1.0 if n % 2 else 1.0
        fact = math.factorial(n)
        num[n] = sign * moment(m, x0, p * n) / fact
        den[n] = 2.0 * sign * moment(m, x0, 2 + p * n) / fact
    taylor = np.empty(order + 1)
    for n in range(order + 1):
        acc = num[n] - np.dot(taylor[:n], den[n:0:-1])
        taylor[n] = acc / den[0]
    return taylor


def big_b_derivatives(m: int, x0: float, order: int) -> list[float]:
    """``[B(x0), B'(x0), ..., B^(order)(x0)]``, no finite differences involved."""
    if order < 1:
        raise ValueError("order must be >= 1")
    taylor = big_b_taylor(m, x0, order)
    return [float(t * math.factorial(n)) for n, t in enumerate(taylor)]


def _potential_log(params: OscillatorParams, tau: float, n: int):
    w2 = params.omega**2
    g = params.g
    p = 2 * params.m

    def log_f(x):
        v = 0.5 * w2 * x * x + g * x**p
        if n == 0:
            return -tau * v
        if v <= 0.0:
            return -math.inf
        return n * math.log(v) - tau * v

    return log_f


def _potential_peak(params: OscillatorParams, tau: float, n: int) -> tuple[float, float]:
    w2 = params.omega**2
    g = params.g
    p = 2 * params.m
    if n == 0:
        width = 1.0 / math.sqrt(tau * w2)
        if g > 0:
            width = min(width, (tau * g) ** (-1.0 / p))
        return 0.0, width
    target = n / tau
    hi = math.sqrt(2.0 * target / w2)
    if g == 0.0:
        x = hi
    else:
        x = optimize.brentq(
            lambda x: 0.5 * w2 * x * x + g * x**p - target, 0.0, hi, xtol=1e-15, rtol=1e-15
        )
    v = target
    dv = w2 * x + p * g * x ** (p - 1)
    d2v = w2 + p * (p - 1) * g * x ** (p - 2)
    curv = n * (dv * dv / (v * v) - d2v / v) + tau * d2v
    return x, 1.0 / math.sqrt(max(curv, 1e-300))


def v_moment(params: OscillatorParams, tau_bar: float, n: int) -> float:
    """``int V(x)^n exp(-tau_bar V(x)) dx`` over the real line.

    These are the coefficients of the Taylor expansion of ``I_g`` in the
    time step: ``I_g(tau_bar + d) = sum_n (-d)^n v_moment(n) / n!``.
    """
    if not tau_bar > 0:
        raise ValueError(f"tau must be positive, got {tau_bar}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    peak, width = _potential_peak(params, tau_bar, n)
    return 2.0 * half_line_integral(_potential_log(params, tau_bar, n), peak, width)


def i_g_beta(params: OscillatorParams, tau_c: float) -> float:
    """``I_g = int exp(-tau_c V(x)) dx``."""
    return v_moment(params, tau_c, 0)


def potential_integral_bar(params: OscillatorParams, omega_bar: float) -> float:
    """Zero-temperature integral ``int exp(-(2/omega_bar) V(x)) dx``."""
    if not omega_bar > 0:
        raise ValueError(f"omega_bar must be positive, got {omega_bar}")
    return i_g_beta(params, 2.0 / omega_bar)


__all__ = [
    "MomentTable",
    "OscillatorParams",
    "QuadratureError",
    "big_b",
    "big_b_derivatives",
    "big_b_taylor",
    "half_line_integral",
    "i_g_beta",
    "moment",
    "moment_hermite",
    "moment_table",
    "potential_integral_bar",
    "v_moment",
]
