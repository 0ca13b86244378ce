"""Truncated power series in ``y0`` whose coefficients are polynomials in ``beta``.

A :class:`CoefficientSeries` of order ``N`` represents::

    X = X_0 + X_1(beta) y0 + X_2(beta) y0**2 + ... + X_N(beta) y0**N

where ``X_0`` is a plain number and every ``X_n`` is a :class:`BetaPolynomial`.
Coefficients beyond ``N`` are unknown, not zero, so every operation truncates
at ``N``.  Internally the series is a dense ``(N + 1, W)`` array whose entry
``[n, k]`` is the ``beta**k`` coefficient of the ``y0**n`` term.

Elementary functions (exp, log1p, reciprocal, real powers) are computed with
the usual first-order recurrences for formal series, so nothing here depends
on hand-expanded multinomial sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real

import numpy as np

DEFAULT_ORDER = 12


class SeriesError(ValueError):
    """Raised when a series operation is called outside its contract."""


def _trim(coeffs: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        return np.zeros(1)
    return coeffs[: nz[-1] + 1]


@dataclass(frozen=True, eq=False)
class BetaPolynomial:
    """Polynomial in ``beta`` with real coefficients, lowest degree first."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = _trim(np.atleast_1d(np.asarray(self.coefficients, dtype=float)))
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> float:
        if k < 0:
            raise IndexError(k)
        return float(self.coefficients[k]) if k <= self.degree else 0.0

    def __call__(self, beta: float) -> float:
        return float(np.polynomial.polynomial.polyval(beta, self.coefficients))

    def __eq__(self, other):
        if not isinstance(other, BetaPolynomial):
            return NotImplemented
        return np.array_equal(self.coefficients, other.coefficients)

    def __repr__(self):
        return f"BetaPolynomial({self.coefficients.tolist()})"


class CoefficientSeries:
    """Truncated series in ``y0`` with :class:`BetaPolynomial` coefficients.

    Args:
        data: array of shape ``(order + 1, width)``; row ``n`` holds the
            ``beta`` coefficients of the ``y0**n`` term. Row 0 may only carry
            a constant.
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        data = np.array(data, dtype=float, ndmin=2)
        if data.shape[0] < 2:
            raise SeriesError("truncation order must be at least 1")
        if np.any(data[0, 1:] != 0.0):
            raise SeriesError("the y0**0 term must not depend on beta")
        width = max(1, max(len(_trim(row)) for row in data))
        data = data[:, :width].copy()
        data.flags.writeable = False
        self._data = data

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(cls, order: int = DEFAULT_ORDER) -> CoefficientSeries:
        return cls(np.zeros((order + 1, 1)))

    @classmethod
    def constant(cls, value: float, order: int = DEFAULT_ORDER) -> CoefficientSeries:
        data = np.zeros((order + 1, 1))
        data[0, 0] = value
        return cls(data)

    @classmethod
    def variable(cls, order: int = DEFAULT_ORDER) -> CoefficientSeries:
        """The series ``y0`` itself."""
        data = np.zeros((order + 1, 1))
        data[1, 0] = 1.0
        return cls(data)

    @classmethod
    def from_terms(cls, terms, constant_term: float = 0.0, order: int | None = None) -> CoefficientSeries:
        """Build from per-order coefficient lists; ``terms[i]`` multiplies ``y0**(i+1)``.

        Missing orders up to ``order`` are zero; extra terms are dropped.
        """
        terms = [np.atleast_1d(np.asarray(getattr(t, "coefficients", t), dtype=float)) for t in terms]
        if order is None:
            order = len(terms)
        width = max([1] + [len(t) for t in terms])
        data = np.zeros((order + 1, width))
        data[0, 0] = constant_term
        for n, t in enumerate(terms[:order], start=1):
            data[n, : len(t)] = t
        return cls(data)

    @classmethod
    def from_scalars(cls, values, constant_term: float = 0.0, order: int | None = None) -> CoefficientSeries:
        """Series whose ``y0**n`` coefficient is the number ``values[n-1]``."""
        return cls.from_terms([[v] for v in values], constant_term, order)

    # -- accessors --------------------------------------------------------

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def order(self) -> int:
        return self._data.shape[0] - 1

    @property
    def truncation_order(self) -> int:
        return self.order

    @property
    def constant_term(self) -> float:
        return float(self._data[0, 0])

    def term(self, n: int) -> BetaPolynomial:
        if not 0 <= n <= self.order:
            raise SeriesError(f"term {n} outside truncation order {self.order}")
        return BetaPolynomial(self._data[n])

    @property
    def terms(self) -> list[BetaPolynomial]:
        return [self.term(n) for n in range(1, self.order + 1)]

    def degrees(self) -> list[int]:
        """Degree in ``beta`` of each term ``n = 0..order`` (zero terms report 0)."""
        return [len(_trim(row)) - 1 for row in self._data]

    def at_beta(self, beta: float) -> np.ndarray:
        """Numeric coefficients of ``y0**n`` with ``beta`` substituted."""
        powers = beta ** np.arange(self._data.shape[1])
        return self._data @ powers

    def evaluate(self, beta: float, y0: float) -> float:
        return float(np.polynomial.polynomial.polyval(y0, self.at_beta(beta)))

    def coefficient(self, n: int, k: int) -> float:
        return extract_coefficient(self, n, k)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> CoefficientSeries:
        if isinstance(other, CoefficientSeries):
            if other.order != self.order:
                raise SeriesError(
                    f"mismatched truncation orders {self.order} and {other.order}"
                )
            return other
        if isinstance(other, Real):
            return CoefficientSeries.constant(float(other), self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return CoefficientSeries(-self._data)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Real):
            return CoefficientSeries(self._data * float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            return CoefficientSeries(self._data / float(other))
        return NotImplemented

    def times_beta(self) -> CoefficientSeries:
        """Multiply by ``beta``; requires a zero constant term."""
        if self.constant_term != 0.0:
            raise SeriesError("times_beta needs a zero constant term")
        shifted = np.zeros((self._data.shape[0], self._data.shape[1] + 1))
        shifted[:, 1:] = self._data
        return CoefficientSeries(shifted)

    def without_constant(self) -> CoefficientSeries:
        data = self._data.copy()
        data[0, 0] = 0.0
        return CoefficientSeries(data)

    def allclose(self, other: CoefficientSeries, rtol: float = 1e-12, atol: float = 0.0) -> bool:
        width = max(self._data.shape[1], other.data.shape[1])
        a = np.zeros((self.order + 1, width))
        b = np.zeros((other.order + 1, width))
        a[:, : self._data.shape[1]] = self._data
        b[:, : other.data.shape[1]] = other.data
        return a.shape == b.shape and np.allclose(a, b, rtol=rtol, atol=atol)

    def __repr__(self):
        return f"CoefficientSeries(order={self.order}, data={self._data.tolist()})"


def _pmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return np.convolve(p, q)


def _padd(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    if len(p) < len(q):
        p, q = q, p
    out = p.copy()
    out[: len(q)] += q
    return out


def _rows(s: CoefficientSeries) -> list[np.ndarray]:
    return [_trim(row) for row in s.data]


def _from_rows(rows: list[np.ndarray]) -> CoefficientSeries:
    width = max(len(r) for r in rows)
    data = np.zeros((len(rows), width))
    for n, r in enumerate(rows):
        data[n, : len(r)] = r
    return CoefficientSeries(data)


def _check_orders(a: CoefficientSeries, b: CoefficientSeries) -> None:
    if a.order != b.order:
        raise SeriesError(f"mismatched truncation orders {a.order} and {b.order}")


def series_add(a: CoefficientSeries, b: CoefficientSeries) -> CoefficientSeries:
    _check_orders(a, b)
    return _from_rows([_padd(p, q) for p, q in zip(_rows(a), _rows(b))])


def series_mul(a: CoefficientSeries, b: CoefficientSeries) -> CoefficientSeries:
    """Cauchy product truncated at the common order."""
    _check_orders(a, b)
    ra, rb = _rows(a), _rows(b)
    out = []
    for n in range(a.order + 1):
        acc = np.zeros(1)
        for i in range(n + 1):
            acc = _padd(acc, _pmul(ra[i], rb[n - i]))
        out.append(acc)
    return _from_rows(out)


def series_exp(a: CoefficientSeries) -> CoefficientSeries:
    """``exp(a)`` for a series with zero constant term.

    Uses ``n f_n = sum_k k a_k f_{n-k}``, which follows from ``f' = a' f``.
    """
    if a.constant_term != 0.0:
        raise SeriesError("series_exp needs a zero constant term")
    ra = _rows(a)
    f = [np.ones(1)]
    for n in range(1, a.order + 1):
        acc = np.zeros(1)
        for k in range(1, n + 1):
            acc = _padd(acc, k * _pmul(ra[k], f[n - k]))
        f.append(acc / n)
    return _from_rows(f)


def series_log1p(a: CoefficientSeries) -> CoefficientSeries:
    """``log(1 + a)`` for a series with zero constant term."""
    if a.constant_term != 0.0:
        raise SeriesError("series_log1p needs a zero constant term")
    ra = _rows(a)
    b = [np.zeros(1)]
    for n in range(1, a.order + 1):
        acc = n * ra[n]
        for k in range(1, n):
            acc = _padd(acc, -k * _pmul(b[k], ra[n - k]))
        b.append(acc / n)
    return _from_rows(b)


def series_recip(a: CoefficientSeries) -> CoefficientSeries:
    """``1 / a`` for a series with nonzero constant term."""
    a0 = a.constant_term
    if a0 == 0.0:
        raise SeriesError("series_recip needs a nonzero constant term")
    ra = _rows(a)
    c = [np.array([1.0 / a0])]
    for n in range(1, a.order + 1):
        acc = np.zeros(1)
        for k in range(1, n + 1):
            acc = _padd(acc, _pmul(ra[k], c[n - k]))
        c.append(-acc / a0)
    return _from_rows(c)


def series_pow(a: CoefficientSeries, r: float) -> CoefficientSeries:
    """Real power of a series.

    A zero constant term is read as ``(1 + a)**r`` (the binomial series);
    a positive constant ``a0`` gives ``a0**r * (1 + a/a0 - 1)**r``.
    """
    a0 = a.constant_term
    if a0 < 0.0:
        raise SeriesError("series_pow needs a nonnegative constant term")
    scale = 1.0
    if a0 != 0.0:
        scale = a0**r
        a = (a / a0).without_constant()
    ra = _rows(a)
    f = [np.ones(1)]
    # (1 + a) f' = r a' f
    for n in range(1, a.order + 1):
        acc = np.zeros(1)
        for k in range(1, n + 1):
            acc = _padd(acc, ((r + 1.0) * k - n) * _pmul(ra[k], f[n - k]))
        f.append(acc / n)
    return _from_rows(f) * scale


def extract_coefficient(s: CoefficientSeries, n: int, k: int) -> float:
    """The ``beta**k`` coefficient of the ``y0**n`` term."""
    if not 0 <= n <= s.order:
        raise SeriesError(f"order {n} outside truncation order {s.order}")
    if k < 0 or k > max(n, s.degrees()[n]):
        raise SeriesError(f"beta power {k} outside the degree of term {n}")
    row = s.data[n]
    return float(row[k]) if k < len(row) else 0.0


def binomial_series_coefficients(r: float, n_max: int) -> list[float]:
    """Coefficients ``r (r-1) ... (r-n+1) / n!`` for ``n = 0..n_max``."""
    out = [1.0]
    for n in range(1, n_max + 1):
        out.append(out[-1] * (r - (n - 1)) / n)
    return out


def power_coefficient(seq, k: int, n: int) -> float:
    """Sum over ``l_1 + ... + l_k = n`` (all ``l_i >= 1``) of ``seq[l_1] ... seq[l_k]``.

    ``seq[0]`` is ignored; this is the ``t**n`` coefficient of
    ``(seq[1] t + seq[2] t**2 + ...)**k``.
    """
    if k == 0:
        return 1.0 if n == 0 else 0.0
    if n < k:
        return 0.0
    base = np.zeros(n + 1)
    upto = min(n, len(seq) - 1)
    base[1 : upto + 1] = np.asarray(seq[1 : upto + 1], dtype=float)
    acc = base.copy()
    for _ in range(k - 1):
        acc = np.convolve(acc, base)[: n + 1]
    return float(acc[n])


__all__ = [
    "BetaPolynomial",
    "CoefficientSeries",
    "DEFAULT_ORDER",
    "SeriesError",
    "binomial_series_coefficients",
    "extract_coefficient",
    "power_coefficient",
    "series_add",
    "series_exp",
    "series_log1p",
    "series_mul",
    "series_pow",
    "series_recip",
]
