import math

import numpy as np
import pytest
from scipy import optimize

from anharmonic.frequency import (
    FrequencySolution,
    SingularDenominatorError,
    delta_omega_series,
    omega_coefficients,
    q_polynomials,
    solve_omega_bar,
    solve_thermal,
)
from anharmonic.quadrature import OscillatorParams, big_b
from anharmonic.crosscheck import q_polynomials_faa_di_bruno, q_polynomials_listed

QUARTIC = OscillatorParams(1.0, 1.0, 2)

# 30-digit mpmath root of w = sqrt(B(2 w)) for m = 2, omega = g = 1
OMEGA_BAR_QUARTIC = 1.86753350345780254451559682186
# same with the thermal argument 2 w coth(5 w / 2)
OMEGA_BETA5_QUARTIC = 1.86761701792641342248705030430
N_C_BETA5_QUARTIC = 4.66986444149190680593539391535
# degree-11 interpolation of w(y) at 12 Chebyshev nodes in [-0.05, 0.05], 40 digits
OMEGA_N_QUARTIC = [0.948908801951634, 0.3990113771296282, 0.39574919762037, 0.2773169743371703]


def test_harmonic_frequency():
    fs = solve_omega_bar(OscillatorParams(1.7, 0.0, 3))
    assert fs.omega_bar == 1.7
    assert all(w == 0.0 for w in fs.omega_coeffs)


def test_omega_bar_frozen():
    fs = solve_omega_bar(QUARTIC)
    assert fs.omega_bar == pytest.approx(OMEGA_BAR_QUARTIC, rel=1e-13)


def test_omega_bar_bisection_oracle():
    root = optimize.bisect(lambda w: w - math.sqrt(big_b(2, 2.0 * w)), 1.0, 3.0, xtol=1e-14)
    assert solve_omega_bar(QUARTIC).omega_bar == pytest.approx(root, rel=1e-10)


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("g", [1e-3, 0.1, 1.0, 100.0, 1e5])
def test_omega_bar_residual(m, g):
    p = OscillatorParams(1.0, g, m)
    fs = solve_omega_bar(p, order=2)
    w = fs.omega_bar
    assert abs(w - math.sqrt(big_b(m, p.x_argument(w)))) / w <= 1e-12
    assert fs.x0 == pytest.approx(p.x_argument(w), rel=1e-15)
    assert fs.tau_bar == pytest.approx(2.0 / w, rel=1e-15)


def test_omega_bar_strong_coupling_scaling():
    gs = np.geomspace(1e3, 1e6, 7)
    ratio = [solve_omega_bar(OscillatorParams(1.0, g, 2), order=1).omega_bar / g ** (1 / 3) for g in gs]
    assert abs(ratio[-1] - ratio[-2]) / ratio[-1] <= 0.01


def test_thermal_harmonic():
    beta, omega = 2.3, 0.8
    th = solve_thermal(OscillatorParams(omega, 0.0, 2), beta)
    z = 0.5 * beta * omega
    assert th.omega_g_beta == omega
    assert th.n_c == pytest.approx(z / math.tanh(z), rel=1e-15)


def test_thermal_frozen_and_bisection():
    th = solve_thermal(QUARTIC, 5.0)
    assert th.omega_g_beta == pytest.approx(OMEGA_BETA5_QUARTIC, rel=1e-12)
    assert th.n_c == pytest.approx(N_C_BETA5_QUARTIC, rel=1e-12)
    root = optimize.bisect(
        lambda w: w - math.sqrt(big_b(2, 2.0 * w / math.tanh(2.5 * w))), 1.0, 3.0, xtol=1e-14
    )
    assert th.omega_g_beta == pytest.approx(root, rel=1e-10)
    assert th.tau_c == pytest.approx(5.0 / th.n_c, rel=1e-15)


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("beta", [0.05, 1.0, 20.0])
def test_thermal_residual(m, beta):
    p = OscillatorParams(1.0, 3.0, m)
    th = solve_thermal(p, beta)
    w = th.omega_g_beta
    x = p.x_argument(w) / math.tanh(0.5 * beta * w) ** (m - 1)
    assert abs(w - math.sqrt(big_b(m, x))) / w <= 1e-12
    assert th.residual <= 1e-12


def test_thermal_large_beta_limits():
    fs = solve_omega_bar(QUARTIC, order=1)
    th = solve_thermal(QUARTIC, 200.0)
    assert th.n_c / 200.0 == pytest.approx(fs.omega_bar / 2, rel=1e-8)
    th = solve_thermal(QUARTIC, 500.0)
    assert th.tau_c == pytest.approx(fs.tau_bar, rel=1e-8)


def test_thermal_rejects_nonpositive_beta():
    with pytest.raises(ValueError):
        solve_thermal(QUARTIC, 0.0)


def test_omega_coefficients_numeric_fit():
    fs = solve_omega_bar(QUARTIC, order=4)
    np.testing.assert_allclose(fs.omega_coeffs[:4], OMEGA_N_QUARTIC, rtol=1e-9)


def test_omega_coefficients_live_fit():
    # independent: solve w(y) directly at small y and fit a polynomial
    ys = 0.02 * np.cos(np.pi * (np.arange(10) + 0.5) / 10)
    ws = [
        optimize.brentq(lambda w: w - math.sqrt(big_b(3, 2.0 * 0.5 * w**2 * ((1 + y) / (1 - y)) ** 2)), 0.5, 5.0, xtol=1e-15)
        for y in ys
    ]
    fit = np.polynomial.polynomial.polyfit(ys, ws, 9)
    fs = solve_omega_bar(OscillatorParams(1.0, 0.5, 3), order=4)
    assert fs.omega_bar == pytest.approx(fit[0], rel=1e-12)
    np.testing.assert_allclose(fs.omega_coeffs[:3], fit[1:4], rtol=1e-6)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_omega_1_closed_form(m):
    fs = solve_omega_bar(OscillatorParams(1.0, 2.0, m), order=3)
    a1 = fs.alphas[1]
    assert fs.omega_coeffs[0] == pytest.approx(fs.omega_bar * a1 * (m - 1) / (1 - a1 * (m - 1) / 2), rel=1e-13)


def test_singular_denominator_flagged():
    # B_1 x0 / B_0 = 2 / (m - 1) makes the prefactor blow up
    fs = FrequencySolution(omega_bar=2.0, x0=1.0, tau_bar=1.0, b_derivs=[1.0, 2.0, 0.0], omega_coeffs=[])
    with pytest.raises(SingularDenominatorError):
        omega_coefficients(fs, OscillatorParams(1.0, 1.0, 2), 2)


def test_q_polynomials_listed_forms():
    w = [0.3, -0.7, 1.1, 0.4, -0.2]
    q = q_polynomials(w, 5)
    assert q[1][0] == pytest.approx(w[1]) and q[1][1] == pytest.approx(-w[0] ** 2)
    assert q[3][3] == pytest.approx(-8.0 / 3.0 * w[0] ** 4, rel=1e-14)
    assert q[4][4] == pytest.approx(125.0 / 24.0 * w[0] ** 5, rel=1e-14)
    for poly, ref in zip(q, q_polynomials_listed(*w)):
        assert poly.degree == len(ref) - 1
        np.testing.assert_allclose(poly.coefficients, ref, rtol=1e-13, atol=1e-15)


def test_q_polynomials_multinomial_recursion():
    rng = np.random.default_rng(3)
    w = list(rng.uniform(-1, 1, 8))
    generic = q_polynomials(w, 8)
    alt = q_polynomials_faa_di_bruno([0.0] + w, 8)
    for n, (a, b) in enumerate(zip(generic, alt), start=1):
        assert a.degree == n - 1
        assert a[0] == pytest.approx(w[n - 1], rel=1e-15)
        np.testing.assert_allclose(a.coefficients, b, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("bw", [3.0, 5.0, 8.0])
def test_series_reconstruction(m, bw):
    p = OscillatorParams(1.0, 1.0, m)
    fs = solve_omega_bar(p, order=12)
    beta = bw / fs.omega_bar
    d = delta_omega_series(fs.omega_coeffs, 12)
    y0 = math.exp(-bw)
    series = fs.omega_bar + d.evaluate(beta, y0)
    assert series == pytest.approx(solve_thermal(p, beta).omega_g_beta, rel=1e-8)
