from __future__ import annotations

import numpy as np
import pytest

from spheroidal.asymptotics import g_large_gamma
from spheroidal.oracle import (
    OracleConfig,
    OracleResolutionError,
    fd_eigenvalues,
    fd_matrix,
    fd_raw_eigenvalues,
    rank_to_label,
)
from spheroidal.spectral import Parity, SpheroidalParams, eigen_result, spheroidal_eigenvalues


def test_spherical_limit():
    got = fd_eigenvalues(SpheroidalParams(0, 0.0), 3)
    for o, exact in zip(got, (0.0, 2.0, 6.0)):
        assert abs(o.g - exact) <= o.error_estimate
    got = fd_eigenvalues(SpheroidalParams(1, 0.0), 2)
    for o, exact in zip(got, (2.0, 6.0)):
        assert abs(o.g - exact) <= o.error_estimate


def test_ground_state_gamma16_near_large_gamma_formula():
    o = fd_eigenvalues(SpheroidalParams(0, 256.0), 1)[0]
    assert o.g == pytest.approx(g_large_gamma(0, 0, 16.0), abs=0.1)
    assert abs(o.g - eigen_result(0, 0, 256.0).g) <= 3 * o.error_estimate


@pytest.mark.parametrize("gamma", [1.0, 4.0])
@pytest.mark.parametrize("m", [0, 2])
def test_agrees_with_spectral(gamma, m):
    params = SpheroidalParams(m, gamma * gamma)
    spec = [r.g for r in spheroidal_eigenvalues(params, m + 9)]
    for s, o in zip(spec, fd_eigenvalues(params, 10)):
        assert abs(s - o.g) <= 3 * o.error_estimate


def test_second_order_convergence():
    params = SpheroidalParams(1, 16.0)
    exact = np.array([eigen_result(1 + k, 1, 16.0).g for k in range(3)])
    Ns = np.array([200, 400, 800])
    errs = np.array([np.abs(fd_raw_eigenvalues(params, 3, int(N)) - exact) for N in Ns])
    for k in range(3):
        slope = np.polyfit(np.log(Ns), np.log(errs[:, k]), 1)[0]
        assert slope == pytest.approx(-2.0, abs=0.1)


def test_matrix_is_finite_and_closed_at_the_poles():
    d, e = fd_matrix(SpheroidalParams(3, 9.0), 100)
    assert d.shape == (100,) and e.shape == (99,)
    assert np.all(np.isfinite(d)) and np.all(np.isfinite(e))
    assert np.all(e < 0)


def test_under_resolved_grid_raises():
    with pytest.raises(OracleResolutionError):
        fd_eigenvalues(SpheroidalParams(0, 10000.0), 55, OracleConfig(N=60))


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(N=10)
    with pytest.raises(ValueError):
        OracleConfig(richardson_levels=0)
    with pytest.raises(ValueError):
        fd_eigenvalues(SpheroidalParams(0, 1.0), 0)


def test_rank_to_label():
    assert rank_to_label(2, 0) == 2
    assert rank_to_label(0, 5) == 5
    assert rank_to_label(-3, 1) == 4
    with pytest.raises(ValueError):
        rank_to_label(0, -1)


def test_ranks_interleave_parity_classes():
    fd = fd_eigenvalues(SpheroidalParams(0, 64.0), 10)
    for o in fd:
        l = rank_to_label(0, o.rank)
        assert Parity.of(l, 0) is (Parity.EVEN if o.rank % 2 == 0 else Parity.ODD)
        assert abs(o.g - eigen_result(l, 0, 64.0).g) <= 3 * o.error_estimate
