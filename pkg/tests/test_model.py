from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lutt_quench.errors import StabilityError
from lutt_quench.model import (Convention, ModelParams, check_light_cones, check_stability,
                               convention_discrepancy, dispersion, potential)
from lutt_quench.errors import LightConeSingularity

stable_lv = st.floats(-0.99 * 2 * math.pi, 0.99 * 2 * math.pi)


def test_box_potential_is_inclusive(reference):
    assert potential(reference, 1.0) == math.pi
    assert potential(reference, 1.0 + 1e-12) == 0.0
    np.testing.assert_array_equal(potential(reference, np.array([0.0, 0.5, 2.0])), [math.pi, math.pi, 0.0])
    with pytest.raises(ValueError):
        potential(reference, -0.1)


def test_theorem_values_at_reference(reference):
    d = dispersion(reference, 0.5)
    assert d.omega == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
    assert d.gamma == pytest.approx(0.25, abs=1e-15)
    assert reference.omega0 == pytest.approx(0.8660254, abs=1e-7)


def test_angle_convention_differs_and_is_reported(reference):
    angle = reference.with_convention(Convention.ANGLE)
    d = dispersion(angle, 0.5)
    assert d.omega == pytest.approx(0.6, abs=1e-14)
    rep = convention_discrepancy(reference)
    assert rep["gamma0_v0_over_2"] == pytest.approx(math.pi / 2)
    assert abs(rep["omega_difference"]) > 0.2


@pytest.mark.parametrize("conv", list(Convention))
def test_outside_support_is_free(reference, conv):
    d = dispersion(reference.with_convention(conv), 2.0)
    assert (d.omega, d.gamma, d.sigma) == (1.0, 0.0, 0.0)


@pytest.mark.parametrize("lam,v0", [(1.0, 2 * math.pi), (-1.0, 2 * math.pi), (3.0, 3.0)])
def test_unstable_construction_raises(lam, v0):
    with pytest.raises(StabilityError):
        ModelParams(lam, v0)


def test_negative_coupling_is_stable():
    check_stability(ModelParams(-1.0, math.pi))


@given(stable_lv)
def test_theorem_identity_omega_squared(lv):
    p = ModelParams(1.0, lv)
    d = dispersion(p, 0.3)
    assert d.omega ** 2 + (lv / (2 * math.pi)) ** 2 == pytest.approx(1.0, abs=1e-14)


def test_continuity_at_zero_coupling():
    d0 = dispersion(ModelParams(0.0, math.pi), 0.5)
    de = dispersion(ModelParams(1e-8, math.pi), 0.5)
    assert abs(d0.omega - de.omega) < 1e-7 and abs(d0.gamma - de.gamma) < 1e-7


def test_light_cone_window():
    with pytest.raises(LightConeSingularity):
        check_light_cones(2.0, 2.0 + 1e-12, (1.0,))
    check_light_cones(2.0, 1.0, (1.0,))


@given(st.floats(-0.95, 0.95))
def test_derived_coefficient_closed_form(g):
    from lutt_quench.model import derived_landau_coefficient
    p = ModelParams(1.0, 2 * math.pi * g)
    assert derived_landau_coefficient(p, 0.5) == pytest.approx(-g / (1 + g), abs=1e-12)
    angle = p.with_convention(Convention.ANGLE)
    assert derived_landau_coefficient(angle, 0.5) == pytest.approx(dispersion(angle, 0.5).gamma, rel=1e-12, abs=1e-15)
