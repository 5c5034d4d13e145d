from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lutt_quench.finite_volume import (ModeGrid, density_finite, density_finite_parts, exponent_main1,
                                       free_propagator_finite, free_propagator_mode_sum, n_delta_squared,
                                       poisson_log_sum, q_box, q_uniform, z_sum)
from lutt_quench.infinite_volume import density_free, z_of_t
from lutt_quench.model import Convention, ModelParams

FREE = ModelParams(0.0, math.pi)


def test_grid_validation():
    with pytest.raises(ValueError):
        ModeGrid(10.0, 0, 0.1)
    with pytest.raises(ValueError):
        ModeGrid(10.0, 5, 0.0)
    g = ModeGrid.covering(100.0, 0.1)
    assert g.p_max >= 1.0 and g.momenta[0] == pytest.approx(2 * math.pi / 100)


def test_grid_must_cover_support(reference):
    with pytest.raises(ValueError):
        exponent_main1(reference, 1.0, 1.0, ModeGrid(100.0, 3, 0.1))


def test_free_exponent_vanishes():
    b = exponent_main1(FREE, 3.0, 1.0, ModeGrid(200.0, 400, 0.05))
    assert b.total == 0


def test_zero_time_exponent_vanishes(reference):
    b = exponent_main1(reference, 3.0, 0.0, ModeGrid(200.0, 400, 0.05))
    assert b.z_term == 0 and abs(b.q_plus + b.q_minus) == 0


@given(st.floats(0, 20))
def test_z_sum_sign_and_time_parity(t):
    p = ModelParams(1.0, math.pi)
    g = ModeGrid(300.0, 60, 0.01)
    assert z_sum(p, t, g) <= 0.0
    assert z_sum(p, t, g) == z_sum(p, -t, g)


@given(st.floats(0.1, 20))
def test_z_sum_is_odd_in_coupling(t):
    # gamma = lam*v/(4 pi) is odd in lam, so the sum flips sign rather than staying put
    g = ModeGrid(300.0, 60, 0.01)
    assert z_sum(ModelParams(-1.0, math.pi), t, g) == -z_sum(ModelParams(1.0, math.pi), t, g)


def test_z_sum_angle_convention_has_no_coupling_symmetry():
    a = ModelParams(1.0, math.pi, convention=Convention.ANGLE)
    b = ModelParams(-1.0, math.pi, convention=Convention.ANGLE)
    g = ModeGrid(300.0, 60, 0.01)
    za, zb = z_sum(a, 3.0, g), z_sum(b, 3.0, g)
    assert za > 0.0 > zb
    assert abs(za + zb) > 1.0


def test_z_sum_approaches_infinite_volume(reference):
    g = ModeGrid.covering(2000.0, 1e-3)
    assert abs(z_sum(reference, 5.0, g) - z_of_t(reference, 5.0)) < 2e-3


def test_poisson_identity():
    g = ModeGrid(1000.0, 50000, 0.2)
    assert math.exp(poisson_log_sum(g)) == pytest.approx(g.L * n_delta_squared(g), rel=1e-12)


def test_n_delta_limit():
    d = 1e-3
    assert n_delta_squared(ModeGrid(1e8 * d, 1, d)) * 4 * math.pi * d == pytest.approx(1.0, rel=1e-6)


@given(st.floats(-8, 8), st.floats(-8, 8), st.sampled_from([1, 2]))
def test_propagator_closed_form_equals_mode_sum(r, t, branch):
    g = ModeGrid(50.0, 3000, 0.3)
    closed = free_propagator_finite(r, t, g, branch, cone_window=0.0)
    assert abs(free_propagator_mode_sum(r, t, g, branch) - closed) < 1e-12 * max(1.0, abs(closed))


def test_branch_product_limit():
    g = ModeGrid(1e8, 1, 1e-7)
    prod = free_propagator_finite(3.0, 1.0, g, 1) * free_propagator_finite(3.0, 1.0, g, 2)
    assert abs(prod - 1 / (32 * math.pi ** 2)) < 1e-6 / (32 * math.pi ** 2)


def test_free_density_limit():
    g = ModeGrid.covering(1e5, 1e-4)
    val = density_finite(FREE, 3.0, 0.0, 1.0, g)
    assert val == pytest.approx(density_free(3.0, 0.0, 1.0), rel=1e-5)


def _asymmetry(p, r, t, L):
    g = ModeGrid.covering(L, 10.0 / L)
    a = density_finite(p, r, 0.0, t, g)
    return abs(a - density_finite(p, -r, 0.0, t, g)) / abs(a)


@pytest.mark.parametrize("r,t", [(1.0, 2.0), (5.0, 2.0), (0.5, 0.3)])
def test_parity_defect_vanishes_with_volume(reference, r, t):
    coarse = _asymmetry(reference, r, t, 1600.0)
    fine = _asymmetry(reference, r, t, 6400.0)
    assert fine < coarse / 10.0
    assert fine < 2e-5


def test_free_density_is_parity_symmetric():
    g = ModeGrid.covering(400.0, 0.05)
    assert density_finite(FREE, 2.0, 0.0, 1.0, g) == pytest.approx(density_finite(FREE, -2.0, 0.0, 1.0, g), rel=1e-12)


def test_uniform_q_tends_to_closed_form_and_box_does_not(reference):
    closed = math.log((25 - 4) / (25 - 3))
    g = ModeGrid.covering(4000.0, 0.0025)
    assert abs(q_uniform(reference, 5.0, 2.0, g) - closed) < 1e-3
    assert abs(q_box(reference, 5.0, 2.0, g) - closed) > 5e-2


def test_doubling_modes_is_harmless_beyond_cutoff(reference):
    g = ModeGrid(100.0, int(100 * 60 / (2 * math.pi)), 0.1)
    g2 = ModeGrid(100.0, 2 * g.n_max, 0.1)
    a = exponent_main1(reference, 2.0, 1.0, g).total
    b = exponent_main1(reference, 2.0, 1.0, g2).total
    assert abs(a - b) < 1e-12


def test_parts_are_real(reference):
    parts = density_finite_parts(reference, 5.0, 0.0, 2.0, ModeGrid.covering(1000.0, 0.01))
    assert isinstance(parts.smooth, float) and isinstance(parts.oscillating, float)
