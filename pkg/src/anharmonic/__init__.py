"""Analytic energy spectrum of the anharmonic oscillator from a model partition function.

``H = -1/2 d^2/dx^2 + omega^2 x^2 / 2 + g x^(2m)``.  The model partition
function is expanded at low temperature in ``y0 = exp(-beta wbar)``; the level
shifts come from the linear-in-beta coefficients of that expansion and are
checked against exact diagonalization.
"""

__version__ = "0.1.0"

from .frequency import (  # noqa: E402
    FrequencySolution,
    SolverError,
    ThermalSolution,
    omega_coefficients,
    q_polynomials,
    solve_omega_bar,
    solve_thermal,
)
from .oracle import OracleSpectrum, exact_levels, hamiltonian_matrix  # noqa: E402
from .partition import PartitionEvaluation, free_energy_curve, ground_energy, model_partition  # noqa: E402
from .quadrature import OscillatorParams, QuadratureError, big_b, moment  # noqa: E402
from .series import BetaPolynomial, CoefficientSeries  # noqa: E402
from .spectrum import SpectrumResult, expand, extract_spectrum, series_z_consistency  # noqa: E402

__all__ = [
    "BetaPolynomial",
    "CoefficientSeries",
    "FrequencySolution",
    "OracleSpectrum",
    "OscillatorParams",
    "PartitionEvaluation",
    "QuadratureError",
    "SolverError",
    "SpectrumResult",
    "ThermalSolution",
    "big_b",
    "exact_levels",
    "expand",
    "extract_spectrum",
    "free_energy_curve",
    "ground_energy",
    "hamiltonian_matrix",
    "model_partition",
    "moment",
    "omega_coefficients",
    "q_polynomials",
    "series_z_consistency",
    "solve_omega_bar",
    "solve_thermal",
]
