"""Explicit coefficient formulas, written out term by term.

These reproduce individual coefficients of the low-temperature expansion from
closed-form sums over integer compositions and partitions.  They share no code
with :mod:`anharmonic.series`, so agreement with the generic series pipeline
is a genuine cross-check.  Nothing in the main pipeline calls them.

Notation: ``w[n]`` is the ``y``-expansion coefficient ``omega_n`` (index 0
unused), ``wbar`` the zero-temperature effective frequency, ``ibar[k]`` the
moment ``int V**k exp(-2 V / wbar) dx`` and ``log_bar = ln(sqrt(wbar/pi) ibar[0])``.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import product

import numpy as np
from numpy.polynomial import polynomial as P


@lru_cache(maxsize=None)
def compositions(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Ordered ``k``-tuples of positive integers summing to ``n``."""
    if k == 0:
        return ((),) if n == 0 else ()
    if k == 1:
        return ((n,),) if n >= 1 else ()
    out = []
    for first in range(1, n - k + 2):
        for rest in compositions(n - first, k - 1):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def multiplicity_vectors(n: int) -> tuple[tuple[int, ...], ...]:
    """All ``(m_1, ..., m_n)`` with ``1 m_1 + 2 m_2 + ... + n m_n = n``."""
    if n == 0:
        return ((),)
    ranges = [range(n // j + 1) for j in range(1, n + 1)]
    return tuple(
        ms for ms in product(*ranges) if sum(j * mj for j, mj in zip(range(1, n + 1), ms)) == n
    )


def q_polynomials_faa_di_bruno(w, n_max: int) -> list[np.ndarray]:
    """``Q_1..Q_n_max`` (coefficient arrays in ``beta``) from the multinomial recursion.

    ``Q_n = w_n + sum_{k<n} w_k sum' prod_j (-k beta Q_j)**m_j / m_j!`` with the
    primed sum over ``sum_j j m_j = n - k``.
    """
    q: list[np.ndarray] = [np.zeros(1)]
    for n in range(1, n_max + 1):
        acc = np.array([w[n]], dtype=float)
        for k in range(1, n):
            for ms in multiplicity_vectors(n - k):
                term = np.array([1.0])
                for j, mj in enumerate(ms, start=1):
                    if mj:
                        factor = P.polymul([0.0, -float(k)], q[j])
                        term = P.polymul(term, P.polypow(factor, mj) / math.factorial(mj))
                acc = P.polyadd(acc, w[k] * term)
        q.append(np.trim_zeros(np.asarray(acc, dtype=float), "b") if np.any(acc) else np.zeros(1))
    return q[1:]


def q_polynomials_listed(w1, w2, w3, w4, w5) -> list[list[float]]:
    """The five lowest polynomials in closed form, coefficients lowest power first."""
    return [
        [w1],
        [w2, -w1**2],
        [w3, -3 * w1 * w2, 1.5 * w1**3],
        [w4, -2 * (2 * w1 * w3 + w2**2), 8 * w2 * w1**2, -8.0 / 3.0 * w1**4],
        [
            w5,
            -5 * (w2 * w3 + w1 * w4),
            12.5 * (w3 * w1**2 + w1 * w2**2),
            -125.0 / 6.0 * w1**3 * w2,
            125.0 / 24.0 * w1**5,
        ],
    ]


def delta_r_n0(n: int) -> float:
    return 1.0


def delta_r_n1(w, n: int) -> float:
    return -sum(k * w[n - k] for k in range(1, n))


def delta_a_n0(w, wbar: float, n: int) -> float:
    total = 0.0
    for k in range(1, n + 1):
        inner = 0.0
        for ls in compositions(n, k):
            inner += math.prod(w[l] / wbar for l in ls) - 2.0**k
        total += (-1) ** (k - 1) / k * inner
    return 0.5 * total


def _x_n0(w, wbar: float, k: int, cross: str) -> float:
    # at beta = 0: Q_l -> w_l and dR_l -> 1
    base = 2.0 + w[k] / wbar
    if cross == "q-q":
        extra = sum(w[l] * w[k - l] for l in range(1, k)) * 2.0 / wbar
    else:
        extra = sum(w[l] for l in range(1, k)) * 2.0 / wbar
    return base + extra


def delta_b_n0(w, wbar: float, ibar, n_max: int, cross: str = "q-dr", log_sign: int = 1) -> list[float]:
    """``dB_{n0}`` for ``n = 1..n_max`` through the time-step chain ``X -> Y -> Z -> dB``.

    ``cross="q-q"`` uses ``Q_l Q_m`` in the last term of ``X_k``; the default
    ``"q-dr"`` uses ``Q_l dR_m``, which is what expanding
    ``tau_c = tau_bar / ((1 + Q/wbar)(1 + 2 dR))`` produces.  ``log_sign=-1``
    flips the sign of the logarithm series in the final step.
    """
    x = [0.0] + [_x_n0(w, wbar, k, cross) for k in range(1, n_max + 1)]
    y = [0.0]
    for n in range(1, n_max + 1):
        y.append(
            2.0 / wbar * sum((-1) ** k * sum(math.prod(x[l] for l in ls) for ls in compositions(n, k))
                             for k in range(1, n + 1))
        )
    z = [0.0]
    for n in range(1, n_max + 1):
        z.append(
            sum((-1) ** k * ibar[k] / math.factorial(k)
                * sum(math.prod(y[l] for l in ls) for ls in compositions(n, k))
                for k in range(1, n + 1))
        )
    out = []
    for n in range(1, n_max + 1):
        out.append(
            sum(log_sign * (-1) ** (k - 1) / (k * ibar[0] ** k)
                * sum(math.prod(z[l] for l in ls) for ls in compositions(n, k))
                for k in range(1, n + 1))
        )
    return out


def s_n0(w, wbar: float, log_bar: float, dt0, n: int) -> float:
    """``S_{n0}`` assembled from the seven-term formula; ``dt0[k]`` is ``dT_{k0}``."""
    c1 = 0.5 * (log_bar - 1.0)
    c2 = 0.5 * wbar
    c3 = wbar * log_bar
    c4 = 0.5
    c5 = log_bar
    c6 = wbar
    c7 = 1.0
    dr0 = 1.0
    pairs = compositions(n, 2)
    total = c1 * w[n] + c2 * dt0[n] + c3 * dr0
    total += c4 * sum(w[a] * dt0[b] for a, b in pairs)
    total += c5 * sum(w[a] * dr0 for a, b in pairs)
    total += c6 * sum(dt0[a] * dr0 for a, b in pairs)
    total += c7 * sum(sum(w[c] * dt0[d] for c, d in compositions(a, 2)) * dr0 for a, b in pairs)
    return total


def p_n1_assembled(w, wbar: float, log_bar: float, ibar, n_max: int) -> list[float]:
    """``P_{n1} = S_{n0} + dR_{n1} + sum_{k+l=n} S_{k0} dR_{l0}`` for ``n = 1..n_max``."""
    db0 = [0.0] + delta_b_n0(w, wbar, ibar, n_max)
    dt0 = [0.0] + [delta_a_n0(w, wbar, n) + db0[n] for n in range(1, n_max + 1)]
    s0 = [0.0] + [s_n0(w, wbar, log_bar, dt0, n) for n in range(1, n_max + 1)]
    out = []
    for n in range(1, n_max + 1):
        cross = sum(s0[k] * delta_r_n0(l) for k, l in compositions(n, 2))
        out.append(s0[n] + delta_r_n1(w, n) + cross)
    return out


__all__ = [
    "compositions",
    "delta_a_n0",
    "delta_b_n0",
    "delta_r_n0",
    "delta_r_n1",
    "multiplicity_vectors",
    "p_n1_assembled",
    "q_polynomials_faa_di_bruno",
    "q_polynomials_listed",
    "s_n0",
]
