from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spheroidal.asymptotics import (
    Regime,
    boundary_parabolas,
    g_large_gamma,
    g_small_gamma,
    neighbor_gaps,
)
from spheroidal.lattice import JointSpectrum, build_joint_spectrum
from spheroidal.spectral import eigen_result
from spheroidal.validation import large_gamma_ratio, small_gamma_slope


def test_small_gamma_formula_values():
    assert g_small_gamma(1, 0, 1.0) == pytest.approx(1.6, abs=1e-15)
    assert g_small_gamma(5, 0, 0.0) == 30.0
    assert abs(g_small_gamma(10, 0, 0.25) - eigen_result(10, 0, 0.25).g) < 1e-4


def test_large_gamma_formula_values():
    assert g_large_gamma(0, 0, 16.0) == -240.75
    assert g_large_gamma(1, 1, 16.0) == -239.75
    with pytest.raises(ValueError):
        g_large_gamma(0, 0, 0.0)
    with pytest.raises(ValueError):
        g_small_gamma(1, 2, 1.0)


def test_large_gamma_residual_halves_for_l2_m0():
    res = [abs(eigen_result(2, 0, g * g).g - g_large_gamma(2, 0, g)) for g in (16.0, 32.0, 64.0)]
    for a, b in zip(res[:-1], res[1:]):
        assert 0.35 <= b / a <= 0.65


def test_large_gamma_n2_m1_residual_changes_sign_then_decays():
    # residual ~ c1/gamma + c2/gamma^2 with opposing signs, so the 16 -> 32 ratio is not 1/2;
    # past the sign change the decay approaches 1/gamma
    r = {g: eigen_result(3, 1, g * g).g - g_large_gamma(3, 1, g) for g in (16.0, 32.0, 64.0, 128.0, 256.0)}
    assert r[16.0] > 0 > r[32.0]
    assert abs(r[256.0] / r[128.0]) == pytest.approx(0.5, abs=0.05)
    assert large_gamma_ratio(2, 1) > 1.0


def test_small_gamma_residual_slope():
    for m in (0, 1):
        slope, err = small_gamma_slope(m)
        assert abs(slope + 2.0) <= 0.3
        assert err < 0.1


def test_boundary_parabolas():
    lower, upper = boundary_parabolas(16.0, 20)
    assert lower(0) == -256.0
    assert lower(20) == pytest.approx(upper(20))
    assert lower(-20) == pytest.approx(upper(-20))
    with pytest.raises(ValueError):
        boundary_parabolas(1.0, 0)


@given(st.floats(0.5, 60.0))
def test_vertex_distances_equal_at_critical_ratio(l_star):
    gamma = math.sqrt(2.0 / 3.0) * l_star
    lower, upper = boundary_parabolas(gamma, l_star)
    assert abs(lower(0)) == pytest.approx(abs(upper(0)), rel=1e-12)
    assert abs(lower(0)) == pytest.approx(2 * l_star**2 / 3, rel=1e-12)


@given(st.floats(0.1, 40.0), st.floats(1.0, 60.0))
def test_parabolas_meet_at_plus_minus_l_star(gamma, l_star):
    lower, upper = boundary_parabolas(gamma, l_star)
    for m in (l_star, -l_star):
        assert lower(m) == pytest.approx(upper(m), rel=1e-10, abs=1e-10 * gamma * gamma)


def test_neighbor_gaps_bottom():
    sp = build_joint_spectrum(32.0, 2, 4)
    rep = neighbor_gaps(sp, Regime.LARGE_GAMMA)
    assert abs(rep.horizontal - 1.0) < 0.1
    # differencing the large-gamma formula gives 4 gamma - (2l + 3) = 125, not 4 gamma + (2l + 3)
    assert abs(rep.vertical - 125.0) < 1.0
    assert rep.vertical_expected == 125.0
    assert rep.vertical_expected == g_large_gamma(2, 0, 32.0) - g_large_gamma(0, 0, 32.0)


def test_neighbor_gaps_top():
    sp = build_joint_spectrum(0.5, 1, 22)
    rep = neighbor_gaps(sp, Regime.SMALL_GAMMA, l=20)
    assert abs(rep.horizontal - 1.0) < 0.1
    assert rep.vertical == pytest.approx(42.0, abs=0.5)


def test_neighbor_gaps_missing_label():
    with pytest.raises(KeyError):
        neighbor_gaps(JointSpectrum(1.0, {(0, 0): 0.0}), Regime.LARGE_GAMMA)
