import math

import numpy as np
import pytest

from anharmonic.frequency import solve_omega_bar
from anharmonic.oracle import exact_levels
from anharmonic.partition import free_energy_curve, ground_energy, model_partition
from anharmonic.quadrature import OscillatorParams
from anharmonic.spectrum import expand

QUARTIC = OscillatorParams(1.0, 1.0, 2)

# 30-digit mpmath evaluation of every factor of Z at beta = 2
LOG_Z_BETA2_QUARTIC = -1.54847234685237908977547175968
# 30-digit mpmath root for wbar and quadrature for Ibar
E0_MODEL_QUARTIC = 0.784993331860517195575599885997


def test_harmonic_partition_random():
    rng = np.random.default_rng(11)
    for _ in range(20):
        omega = float(rng.uniform(0.2, 5.0))
        beta = float(10 ** rng.uniform(-2, 1.5))
        z = model_partition(OscillatorParams(omega, 0.0, 2), beta).z_value
        exact = 1.0 / (2.0 * math.sinh(0.5 * beta * omega))
        assert z == pytest.approx(exact, rel=1e-12)


def test_log_domain_huge_beta():
    ev = model_partition(OscillatorParams(1.0, 0.0, 2), 2000.0)
    assert ev.log_z == pytest.approx(-1000.0, rel=1e-15)
    assert ev.free_energy == pytest.approx(0.5, rel=1e-15)


def test_quartic_frozen():
    assert model_partition(QUARTIC, 2.0).log_z == pytest.approx(LOG_Z_BETA2_QUARTIC, rel=1e-12)


def test_ground_energy_harmonic():
    for omega in (0.3, 1.0, 4.0):
        assert ground_energy(OscillatorParams(omega, 0.0, 3)) == pytest.approx(omega / 2, rel=1e-14)


def test_ground_energy_frozen_and_oracle():
    e0 = ground_energy(QUARTIC)
    assert e0 == pytest.approx(E0_MODEL_QUARTIC, rel=1e-12)
    ref = exact_levels(QUARTIC, 1).eigenvalues[0]
    assert abs(e0 - ref) / ref <= 0.05


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("g", [0.1, 1.0, 10.0])
def test_large_beta_limit(m, g):
    p = OscillatorParams(1.0, g, m)
    wbar = solve_omega_bar(p, order=1).omega_bar
    ev = model_partition(p, 100.0 / wbar)
    assert abs(ev.free_energy - ground_energy(p)) <= 1e-5


def test_richardson_toward_ground_energy():
    p = OscillatorParams(1.0, 2.0, 2)
    f100 = model_partition(p, 100.0).free_energy
    f200 = model_partition(p, 200.0).free_energy
    # leading correction is O(1 / beta)
    assert 2.0 * f200 - f100 == pytest.approx(ground_energy(p), abs=1e-6)


def test_sextic_beta50():
    p = OscillatorParams(1.0, 10.0, 3)
    assert abs(model_partition(p, 50.0).free_energy - ground_energy(p)) <= 1e-5


def test_free_energy_curve_harmonic():
    omega = 1.4
    betas = [0.1, 1.0, 7.0]
    curve = free_energy_curve(OscillatorParams(omega, 0.0, 2), betas)
    for beta, f in curve:
        assert f == pytest.approx(omega / 2 + math.log1p(-math.exp(-beta * omega)) / beta, rel=1e-12)


@pytest.mark.parametrize("g", [0.1, 1.0, 10.0])
def test_free_energy_curve_monotone_tail_quartic(g):
    p = OscillatorParams(1.0, g, 2)
    curve = free_energy_curve(p, np.geomspace(0.5, 60.0, 15))
    assert curve.monotone_tail
    assert curve[-1][1] == pytest.approx(ground_energy(p), abs=1e-12)


@pytest.mark.parametrize("m", [3, 4])
def test_free_energy_crossing_follows_series(m):
    # F - E0 = -ln(1 + y0 P_1(beta) + ...) / beta, and P_1(beta) = 1 + P_11 beta changes sign
    p = OscillatorParams(1.0, 1.0, m)
    ex = expand(p, 12)
    wbar = ex.frequency.omega_bar
    p1 = ex.bundle.p.term(1)
    assert p1[1] < 0
    for bw in (8.0, 12.0, 25.0, 30.0):
        beta = bw / wbar
        gap = model_partition(p, beta).free_energy - ground_energy(p)
        assert math.copysign(1.0, gap) == -math.copysign(1.0, p1(beta))
    assert not free_energy_curve(p, np.geomspace(0.5, 60.0, 15)).monotone_tail


def test_free_energy_curve_rejects_bad_beta():
    with pytest.raises(ValueError):
        free_energy_curve(QUARTIC, [1.0, -1.0])


@pytest.mark.parametrize("m", [2, 3, 4])
def test_positive_and_smooth(m):
    p = OscillatorParams(1.0, 5.0, m)
    betas = np.geomspace(0.01, 30.0, 40)
    logs = [model_partition(p, b).log_z for b in betas]
    assert all(math.isfinite(v) for v in logs)
    # no sign-flipping steps: ln Z decreases along the whole grid
    d = np.diff(logs)
    assert np.all(d < 0)


def test_thermal_fields_consistent():
    ev = model_partition(QUARTIC, 3.0)
    th = ev.thermal
    assert th.n_c >= 1.0
    assert ev.c_beta > 0 and ev.i_g > 0
    assert th.tau_c * th.n_c == pytest.approx(3.0, rel=1e-15)
