"""End-to-end smoke tests of the Python bindings.

These only check cheap, independently known values; the heavy validation
lives in the C++ unit and acceptance suites.
"""

import math
from fractions import Fraction

import pytest

import lplde


def test_kappa_table_exact_fractions():
    kt = lplde.kappa_table(6)
    assert set(kt) == {2, 4, 6}
    assert Fraction(kt[2]) == Fraction(3, 128)
    assert Fraction(kt[4]) == Fraction(51, 131072)
    assert Fraction(kt[6]) == Fraction(213, 16777216)


def test_third_order_lambda_sq_closed_forms():
    assert Fraction(lplde.third_order_lambda_sq("duffing", "100", "1")) == 75
    assert Fraction(lplde.third_order_lambda_sq("duffing", "1", "1")) == Fraction(3, 4)
    assert Fraction(lplde.third_order_lambda_sq("sextic", "1", "1")) == Fraction(211, 312)
    assert Fraction(lplde.third_order_lambda_sq("octic", "1", "1")) == Fraction(10885, 16896)


def test_harmonic_limit_has_period_two_pi():
    # With no anharmonic term the oscillator is linear and the expansion is
    # exact at every order.
    assert lplde.conservative_period("duffing", 0.0, 1.0, 3) == pytest.approx(
        2 * math.pi, rel=1e-15
    )


def test_approximation_matches_quadrature_oracle():
    approx = lplde.conservative_period("duffing", 1.0, 1.0, 10)
    exact = lplde.exact_conservative_period("duffing", 1.0, 1.0)
    assert approx == pytest.approx(exact, rel=1e-8)


def test_fourier_leading_coefficient_dominates():
    c = lplde.conservative_fourier("duffing", 1.0, 1.0, 6)
    # x(0) = A = 1: the cosine coefficients sum to the amplitude.
    assert sum(c) == pytest.approx(1.0, rel=1e-12)
    assert c[0] > 0.9
    assert all(abs(lo) > abs(hi) for lo, hi in zip(c, c[1:]))


def test_vdp_period_near_known_value():
    # Limit-cycle period for unit coupling, order 20 with the fitted
    # auxiliary parameter.
    assert lplde.vdp_period(1.0, 20) == pytest.approx(6.66328686, rel=1e-5)


def test_pms_recovers_closed_form_optimum():
    lam2 = lplde.pms_lambda_sq("duffing", 100.0, 1.0, 3, tol=1e-10)
    assert lam2 == pytest.approx(75.0, rel=1e-6)


def test_invalid_input_raises_library_error():
    with pytest.raises(lplde.Error):
        lplde.vdp_period(-1.0, 6)
    with pytest.raises(lplde.Error):
        lplde.kappa_table(1)
    with pytest.raises(lplde.Error):
        lplde.conservative_period("quintic", 1.0, 1.0, 3)
