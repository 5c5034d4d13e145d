from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, strategies as st

from lutt_quench.errors import InsufficientSamples, NonPositiveValue, ToleranceNotMet
from lutt_quench.numerics import QuadratureSpec, ci, cin, compensated_sum, fit_power_law, integrate


@given(st.floats(1e-6, 1e4))
def test_cin_matches_library(u):
    ref = np.euler_gamma + math.log(u) - sc.sici(u)[1]
    assert cin(u) == pytest.approx(ref, rel=1e-12, abs=1e-14)


def test_cin_small_argument_series():
    assert cin(0.0) == 0.0
    assert cin(1e-3) == pytest.approx(1e-6 / 4, rel=1e-6)


def test_ci_large_argument():
    assert ci(200.0) == pytest.approx(sc.sici(200.0)[1], abs=1e-14)


def test_integrate_oscillatory():
    spec = QuadratureSpec(oscillation_period=2 * math.pi / 50.0)
    val = integrate(lambda p: (1 - np.cos(50.0 * p)) / p, 0.0, 1.0, spec)
    assert val == pytest.approx(cin(50.0), abs=1e-10)


def test_integrate_gives_up():
    with pytest.raises(ToleranceNotMet):
        integrate(lambda p: np.sin(1.0 / np.maximum(p, 1e-300)), 0.0, 1.0,
                  QuadratureSpec(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=5))


def test_compensated_sum_is_exact_in_the_hard_case():
    assert compensated_sum([1e16, 1.0, -1e16]) == 1.0


@given(st.floats(0.05, 3.0), st.floats(0.1, 10.0))
def test_power_law_recovered(exponent, amplitude):
    t = np.geomspace(1.0, 100.0, 20)
    rep = fit_power_law(list(zip(t, amplitude * t ** -exponent)), (1.0, 100.0))
    assert rep.exponent == pytest.approx(exponent, abs=1e-10)
    assert rep.amplitude == pytest.approx(amplitude, rel=1e-10)


def test_fit_rejects_bad_samples():
    t = np.linspace(1, 2, 10)
    with pytest.raises(NonPositiveValue):
        fit_power_law([(a, -1.0) for a in t], (1, 2))
    with pytest.raises(InsufficientSamples):
        fit_power_law([(1.0, 1.0), (2.0, 0.5)], (1, 2))
