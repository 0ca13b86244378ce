"""Acceptance suite: one test per criterion, each printing its pass/fail line.

Tolerances live in :mod:`anharmonic.validation` and are the stated ones.
"""

import pytest

from anharmonic import validation

CRITERIA = {fn.number: fn for fn in validation.ALL_CRITERIA}


def check(number, capsys):
    result = CRITERIA[number]()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()


def test_criterion_01_harmonic_exactness(capsys):
    check(1, capsys)


def test_criterion_02_q_polynomial_identities(capsys):
    check(2, capsys)


def test_criterion_03_series_consistency(capsys):
    check(3, capsys)


def test_criterion_04_formula_equivalence(capsys):
    check(4, capsys)


def test_criterion_05_oracle_convergence(capsys):
    check(5, capsys)


def test_criterion_06_model_accuracy(capsys):
    check(6, capsys)


def test_criterion_07_ground_state_accuracy(capsys):
    check(7, capsys)


def test_criterion_08_strong_coupling_scaling(capsys):
    check(8, capsys)


def test_criterion_09_moment_identity(capsys):
    check(9, capsys)


@pytest.mark.slow
def test_criterion_10_figure_reproduction(capsys):
    check(10, capsys)
