"""Reference spectrum by diagonalizing ``H`` in a harmonic-oscillator basis.

The basis has frequency ``Omega``; the default is ``m * wbar`` (``omega``
when ``g = 0``).  Narrower basis functions converge in fewer states, which
keeps ``|H|`` small: the eigensolver error grows like ``eps * |H|`` and
``|x**(2m)|`` grows like ``(N / Omega)**m``.

With ``x = (a + a^dagger) / sqrt(2 Omega)`` the position matrix is
tridiagonal and ``x**(2m)`` has bandwidth ``2m``.  Only even-to-even and odd-to-odd couplings exist, so the
two parity blocks are diagonalized separately.

An independent finite-difference grid solver lives here too; it is used only
to cross-check the basis results.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .frequency import solve_omega_bar
from .quadrature import OscillatorParams

log = logging.getLogger(__name__)

DEFAULT_REL_TOL = 1e-9
START_BASIS = 64
MAX_BASIS = 2048
GROWTH = 1.5


@dataclass(frozen=True)
class OracleSpectrum:
    params: OscillatorParams
    basis_size: int
    basis_frequency: float
    eigenvalues: list[float]
    converged_count: int
    drift: float
    converged: bool

    @property
    def levels(self) -> list[float]:
        return self.eigenvalues


def _position_matrix(size: int, basis_frequency: float) -> np.ndarray:
    off = np.sqrt(np.arange(1, size) / (2.0 * basis_frequency))
    return np.diag(off, 1) + np.diag(off, -1)


def hamiltonian_matrix(
    params: OscillatorParams, basis_size: int, basis_frequency: float | None = None
) -> np.ndarray:
    """Dense matrix of ``H`` in the first ``basis_size`` oscillator states of frequency ``Omega``."""
    m = params.m
    if basis_size < 2 * m + 1:
        raise ValueError(f"basis_size must be >= {2 * m + 1}")
    omega_b = params.omega if basis_frequency is None else float(basis_frequency)
    pad = basis_size + 2 * m
    x = _position_matrix(pad, omega_b)
    x2 = x @ x
    n = np.arange(pad)
    # p^2/2 = (Omega/4) (2n + 1 - a^dag^2 - a^2); x^2 carries +a^dag^2 + a^2 with 1/(2 Omega)
    x2_off = x2 - np.diag(np.diag(x2))
    kinetic = 0.25 * omega_b * ((2 * n + 1) * np.eye(pad) - 2.0 * omega_b * x2_off)
    pot = 0.5 * params.omega**2 * x2
    if params.g != 0.0:
        xp = np.linalg.matrix_power(x2, m)
        pot = pot + params.g * xp
    h = (kinetic + pot)[:basis_size, :basis_size]
    h = 0.5 * (h + h.T)
    odd = (np.add.outer(np.arange(basis_size), np.arange(basis_size)) % 2) == 1
    if np.any(h[odd] != 0.0):
        raise AssertionError("parity-violating matrix elements")
    return h


def jacobi_eigvalsh(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 50) -> np.ndarray:
    """Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    scale = np.linalg.norm(a)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
    else:
        raise RuntimeError("Jacobi sweeps did not converge")
    return np.sort(np.diag(a))


def _lowest(h: np.ndarray, count: int, method: str) -> np.ndarray:
    evens = h[0::2, 0::2]
    odds = h[1::2, 1::2]
    vals = []
    for block in (evens, odds):
        k = min(count, block.shape[0])
        if method == "jacobi":
            vals.append(jacobi_eigvalsh(block)[:k])
        else:
            vals.append(linalg.eigh(block, eigvals_only=True, subset_by_index=(0, k - 1)))
    return np.sort(np.concatenate(vals))[:count]


def basis_levels(
    params: OscillatorParams,
    basis_size: int,
    n_levels: int,
    basis_frequency: float | None = None,
    method: str = "lapack",
) -> np.ndarray:
    """Lowest ``n_levels`` eigenvalues at a fixed basis size."""
    h = hamiltonian_matrix(params, basis_size, basis_frequency)
    return _lowest(h, n_levels, method)


def default_basis_frequency(params: OscillatorParams) -> float:
    if params.g == 0.0:
        return params.omega
    return params.m * solve_omega_bar(params, order=1).omega_bar


def exact_levels(
    params: OscillatorParams,
    n_levels: int = 9,
    rel_tol: float = DEFAULT_REL_TOL,
    basis_frequency: float | None = None,
    start: int = START_BASIS,
    cap: int = MAX_BASIS,
) -> OracleSpectrum:
    """Lowest ``n_levels`` eigenvalues, growing the basis until they stop moving.

    The basis grows by a factor 1.5 from ``start``; convergence means the
    largest relative change of the requested levels between two successive
    sizes is at most ``rel_tol``.  Hitting ``cap`` first returns the last
    result with ``converged=False``.
    """
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    if basis_frequency is None:
        basis_frequency = default_basis_frequency(params)
    size = max(start, 2 * n_levels + 2 * params.m + 2)
    prev = basis_levels(params, size, n_levels, basis_frequency)
    drift = math.inf
    while True:
        nxt = min(cap, int(math.ceil(size * GROWTH)))
        if nxt == size:
            break
        cur = basis_levels(params, nxt, n_levels, basis_frequency)
        drift = float(np.max(np.abs(cur - prev) / np.abs(cur)))
        size, prev = nxt, cur
        if drift <= rel_tol:
            break
    converged = drift <= rel_tol
    if not converged:
        log.warning("oracle not converged for %s: drift %.3e at basis %d", params, drift, size)
    return OracleSpectrum(
        params=params,
        basis_size=size,
        basis_frequency=float(basis_frequency),
        eigenvalues=[float(v) for v in prev],
        converged_count=n_levels if converged else 0,
        drift=drift,
        converged=converged,
    )


def grid_levels(params: OscillatorParams, n_levels: int, half_width: float, points: int) -> np.ndarray:
    """Three-point finite-difference levels on ``[-L, L]`` with Dirichlet walls."""
    x, h = np.linspace(-half_width, half_width, points + 2, retstep=True)
    x = x[1:-1]
    diag = 1.0 / h**2 + params.potential(x)
    off = np.full(points - 1, -0.5 / h**2)
    return linalg.eigh_tridiagonal(
        diag, off, eigvals_only=True, select="i", select_range=(0, n_levels - 1)
    )


def grid_levels_richardson(
    params: OscillatorParams, n_levels: int = 1, half_width: float = 8.0, points: int = 2000
) -> np.ndarray:
    """Grid levels extrapolated from spacings ``h``, ``h/2``, ``h/4`` (error ``O(h**6)``)."""
    cells = points + 1
    e1 = grid_levels(params, n_levels, half_width, cells - 1)
    e2 = grid_levels(params, n_levels, half_width, 2 * cells - 1)
    e4 = grid_levels(params, n_levels, half_width, 4 * cells - 1)
    r1 = (4.0 * e2 - e1) / 3.0
    r2 = (4.0 * e4 - e2) / 3.0
    return (16.0 * r2 - r1) / 15.0


__all__ = [
    "OracleSpectrum",
    "basis_levels",
    "default_basis_frequency",
    "exact_levels",
    "grid_levels",
    "grid_levels_richardson",
    "hamiltonian_matrix",
    "jacobi_eigvalsh",
]
