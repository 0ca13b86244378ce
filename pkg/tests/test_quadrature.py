import math

import mpmath as mp
import numpy as np
import pytest

from anharmonic.quadrature import (
    OscillatorParams,
    big_b,
    big_b_derivatives,
    i_g_beta,
    moment,
    moment_hermite,
    potential_integral_bar,
    v_moment,
)

SQRT_PI = math.sqrt(math.pi)

# 30-digit mpmath quadrature with breakpoints around the integrand peak
MOMENT_2_1_0 = 1.36842685573550877311107189899
BIG_B_3_1 = 2.13503917884793980173496131617


def mp_moment(m, x, k):
    """Reference moment with breakpoints scaled to the integrand width."""
    with mp.workdps(30):
        scale = min(1.0, float(x) ** (-1.0 / (2 * m))) if x > 0 else 1.0
        pts = [0] + [scale * c for c in (0.25, 0.5, 1, 2, 4, 8)] + [mp.inf]
        return float(2 * mp.quad(lambda y: y**k * mp.exp(-(y**2) - x * y ** (2 * m)), pts))


def test_gaussian_moments():
    assert moment(2, 0.0, 0) == pytest.approx(SQRT_PI, rel=1e-15)
    assert moment(2, 0.0, 2) == pytest.approx(SQRT_PI / 2, rel=1e-15)


def test_moment_frozen_reference():
    assert moment(2, 1.0, 0) == pytest.approx(MOMENT_2_1_0, rel=1e-13)


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("x", [1e-3, 0.5, 10.0, 1e4, 1e6])
@pytest.mark.parametrize("k", [0, 2, 8])
def test_moment_against_mpmath(m, x, k):
    assert moment(m, x, k) == pytest.approx(mp_moment(m, x, k), rel=1e-12)


def test_moment_domain():
    with pytest.raises(ValueError):
        moment(2, -1.0, 0)
    with pytest.raises(ValueError):
        moment(2, 1.0, 3)


def test_half_line_doubling_matches_full_line():
    full = mp.quad(lambda y: mp.exp(-(y**2) - 0.7 * y**6), [-mp.inf, -1, 0, 1, mp.inf])
    assert moment(3, 0.7, 0) == pytest.approx(float(full), rel=1e-13)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_moment_decreasing_in_x(m):
    xs = np.geomspace(1e-3, 1e5, 25)
    for k in (0, 2, 4):
        vals = [moment(m, x, k) for x in xs]
        assert all(b < a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_big_b_at_least_one_and_nondecreasing(m):
    assert big_b(m, 0.0) == 1.0
    xs = np.concatenate([[0.0], np.geomspace(1e-4, 1e6, 40)])
    vals = [big_b(m, x) for x in xs]
    assert min(vals) >= 1.0
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_big_b_dual_scheme():
    assert big_b(3, 1.0) == pytest.approx(BIG_B_3_1, rel=1e-12)
    # trapezoid rule converges geometrically for smooth, fast-decaying integrands
    y, h = np.linspace(-6.0, 6.0, 4001, retstep=True)
    w = np.exp(-(y**2) - y**6)
    trap = np.sum(w) / (2 * np.sum(y**2 * w))
    assert big_b(3, 1.0) == pytest.approx(trap, rel=1e-11)


def test_hermite_scheme_small_x():
    for k in (0, 2, 4):
        assert moment_hermite(2, 1e-3, k) == pytest.approx(moment(2, 1e-3, k), rel=1e-10)


def test_big_b_large_x_exponent_m2():
    xs = np.geomspace(1e3, 1e6, 7)
    slope = np.polyfit(np.log(xs), np.log([big_b(2, x) for x in xs]), 1)[0]
    assert slope == pytest.approx(0.5, rel=1e-2)
    # limiting prefactor: B ~ Gamma(1/4) / (2 Gamma(3/4)) x^(1/2)
    c = math.gamma(0.25) / (2 * math.gamma(0.75))
    assert big_b(2, 1e8) / 1e4 == pytest.approx(c, rel=1e-3)


def test_big_b_first_derivative_at_zero_m2():
    # quotient rule with M0 = sqrt(pi), M2 = sqrt(pi)/2, M4 = 3 sqrt(pi)/4, M6 = 15 sqrt(pi)/8
    d = big_b_derivatives(2, 0.0, 1)
    assert d[0] == pytest.approx(1.0, rel=1e-15)
    assert d[1] == pytest.approx(3.0, rel=1e-14)
    h = 1e-5
    fd = (big_b(2, h) - 1.0) / h
    assert fd == pytest.approx(3.0, rel=1e-4)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_big_b_first_derivative_finite_difference(m):
    x0, h = 1.0, 1e-4
    fd = (big_b(m, x0 + h) - big_b(m, x0 - h)) / (2 * h)
    assert big_b_derivatives(m, x0, 1)[1] == pytest.approx(fd, rel=1e-7)


def test_big_b_higher_derivatives_finite_difference():
    x0, h = 0.8, 1e-3
    d = big_b_derivatives(2, x0, 3)
    f = [big_b(2, x0 + j * h) for j in (-2, -1, 0, 1, 2)]
    d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
    d3 = (-f[0] + 2 * f[1] - 2 * f[3] + f[4]) / (2 * h**3)
    assert d[2] == pytest.approx(d2, rel=1e-6)
    assert d[3] == pytest.approx(d3, rel=1e-4)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_alpha_sequence_decays(m):
    x0 = 1.0
    d = big_b_derivatives(m, x0, 8)
    assert all(math.isfinite(v) for v in d)
    alphas = [abs(b) * x0**n / (math.factorial(n) * d[0]) for n, b in enumerate(d)]
    assert alphas[-1] < alphas[1]


def test_potential_integral_harmonic():
    for omega in (0.5, 1.0, 3.0):
        p = OscillatorParams(omega, 0.0, 2)
        assert potential_integral_bar(p, omega) == pytest.approx(math.sqrt(math.pi / omega), rel=1e-13)
        assert potential_integral_bar(p, 2.0) == pytest.approx(math.sqrt(2 * math.pi) / omega, rel=1e-13)


@pytest.mark.parametrize("m,g,omega", [(2, 1.0, 1.0), (3, 0.3, 2.0), (4, 50.0, 0.7)])
def test_moment_identity(m, g, omega):
    p = OscillatorParams(omega, g, m)
    wbar = 1.9
    via = math.sqrt(wbar) / omega * moment(m, p.x_argument(wbar), 0)
    assert potential_integral_bar(p, wbar) == pytest.approx(via, rel=1e-11)


def test_v_moment_consistency_and_derivative():
    p = OscillatorParams(1.0, 1.0, 2)
    tau = 1.1
    assert v_moment(p, tau, 0) == pytest.approx(i_g_beta(p, tau), rel=1e-15)
    h = 1e-5
    fd = -(i_g_beta(p, tau + h) - i_g_beta(p, tau - h)) / (2 * h)
    assert v_moment(p, tau, 1) == pytest.approx(fd, rel=1e-7)


def test_v_moment_harmonic_closed_form():
    omega, tau = 1.3, 0.9
    p = OscillatorParams(omega, 0.0, 2)
    expected = 1.0 / (2 * tau) * math.sqrt(2 * math.pi / (tau * omega**2))
    assert v_moment(p, tau, 1) == pytest.approx(expected, rel=1e-13)
    assert i_g_beta(p, tau) == pytest.approx(math.sqrt(2 * math.pi / (tau * omega**2)), rel=1e-13)


@pytest.mark.parametrize("n", [0, 1, 4, 9])
def test_v_moment_against_mpmath(n):
    p = OscillatorParams(1.0, 1.0, 3)
    tau = 0.6
    ref = mp.quad(lambda x: (x**2 / 2 + x**6) ** n * mp.exp(-tau * (x**2 / 2 + x**6)), [0, 0.5, 1, 1.5, 2, 3, mp.inf])
    assert v_moment(p, tau, n) == pytest.approx(2 * float(ref), rel=1e-12)


def test_i_g_dual_scheme_quartic():
    p = OscillatorParams(1.0, 1.0, 2)
    # substitution x = sqrt(2) y maps onto a moment with weight exp(-y^2)
    via = math.sqrt(2.0) * moment(2, 4.0, 0)
    assert i_g_beta(p, 1.0) == pytest.approx(via, rel=1e-11)
    x, h = np.linspace(-6.0, 6.0, 4001, retstep=True)
    trap = h * np.sum(np.exp(-(0.5 * x**2 + x**4)))
    assert i_g_beta(p, 1.0) == pytest.approx(trap, rel=1e-11)


def test_params_validation():
    with pytest.raises(ValueError):
        OscillatorParams(0.0, 1.0, 2)
    with pytest.raises(ValueError):
        OscillatorParams(1.0, -1.0, 2)
    with pytest.raises(ValueError):
        OscillatorParams(1.0, 1.0, 1)
