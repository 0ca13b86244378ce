"""Closed-form model partition function, free energy and ground-state energy.

``Z(beta) = C**n_c / (2 sinh(beta w / 2))`` with
``C = sqrt(w / (pi coth(beta w / 2))) * I_g`` and ``I_g = int exp(-tau_c V)``,
where ``w``, ``n_c``, ``tau_c`` come from :func:`~anharmonic.frequency.solve_thermal`.
Everything is assembled in the log domain::

    ln Z = n_c ln C - beta w / 2 - ln(1 - exp(-beta w))
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .frequency import FrequencySolution, ThermalSolution, solve_omega_bar, solve_thermal
from .quadrature import OscillatorParams, i_g_beta, potential_integral_bar


@dataclass(frozen=True)
class PartitionEvaluation:
    beta: float
    log_z: float
    free_energy: float
    thermal: ThermalSolution
    c_beta: float
    i_g: float

    @property
    def z_value(self) -> float:
        return math.exp(self.log_z)


def model_partition(params: OscillatorParams, beta: float) -> PartitionEvaluation:
    th = solve_thermal(params, beta)
    w = th.omega_g_beta
    bw = beta * w
    i_g = i_g_beta(params, th.tau_c)
    # coth(bw/2) = n_c / (bw/2)
    coth = th.n_c / (0.5 * bw)
    log_c = 0.5 * math.log(w / (math.pi * coth)) + math.log(i_g)
    log_z = th.n_c * log_c - 0.5 * bw - math.log1p(-math.exp(-bw))
    return PartitionEvaluation(
        beta=beta,
        log_z=log_z,
        free_energy=-log_z / beta,
        thermal=th,
        c_beta=math.exp(log_c),
        i_g=i_g,
    )


def log_zero_temperature_factor(params: OscillatorParams, omega_bar: float) -> float:
    """``ln(sqrt(wbar / pi) * Ibar_g)``, the logarithm that enters ``E_0`` and the ``c_i``."""
    return 0.5 * math.log(omega_bar / math.pi) + math.log(potential_integral_bar(params, omega_bar))


def ground_energy(params: OscillatorParams, fs: FrequencySolution | None = None) -> float:
    """``E_0 = (wbar / 2) (1 - ln(sqrt(wbar / pi) Ibar_g))``."""
    if fs is None:
        fs = solve_omega_bar(params, order=1)
    w = fs.omega_bar
    return 0.5 * w * (1.0 - log_zero_temperature_factor(params, w))


ROUNDOFF = 1e-12


class FreeEnergyCurve(list):
    """List of ``(beta, -ln Z / beta)`` pairs with a tail-monotonicity flag.

    ``monotone_tail`` is true when the values for ``beta * wbar > 5`` move in
    one direction only (they approach ``E_0`` from one side).
    """

    monotone_tail: bool = True
    omega_bar: float = 0.0


def free_energy_curve(params: OscillatorParams, betas) -> FreeEnergyCurve:
    fs = solve_omega_bar(params, order=1)
    curve = FreeEnergyCurve()
    curve.omega_bar = fs.omega_bar
    for beta in betas:
        if not beta > 0:
            raise ValueError(f"beta must be positive, got {beta}")
        curve.append((float(beta), model_partition(params, beta).free_energy))
    tail = [f for b, f in sorted(curve) if b * fs.omega_bar > 5.0]
    # steps at roundoff level carry no direction
    steps = [b - a for a, b in zip(tail, tail[1:]) if abs(b - a) > ROUNDOFF * abs(b)]
    curve.monotone_tail = all(s > 0 for s in steps) or all(s < 0 for s in steps)
    return curve


__all__ = [
    "FreeEnergyCurve",
    "PartitionEvaluation",
    "free_energy_curve",
    "ground_energy",
    "log_zero_temperature_factor",
    "model_partition",
]
