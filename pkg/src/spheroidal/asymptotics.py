"""Closed-form eigenvalue asymptotics and the neighbour gaps that expose monodromy."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Regime(enum.Enum):
    SMALL_GAMMA = "small"
    LARGE_GAMMA = "large"


def g_small_gamma(l: int, m: int, gamma2: float) -> float:
    """l(l+1) - (1 + (2m-1)(2m+1)/((2l-1)(2l+3))) gamma^2 / 2; error O(gamma^4 / l^2)."""
    if l < abs(m):
        raise ValueError("need l >= |m|")
    split = 1.0 + (2 * m - 1) * (2 * m + 1) / ((2 * l - 1) * (2 * l + 3))
    return l * (l + 1) - 0.5 * split * gamma2


def g_large_gamma(l: int, m: int, gamma: float) -> float:
    """-gamma^2 + (2n+1) gamma - 3/4 + m^2 - n(n+1)/2 with n = l - |m|; error O(1/gamma)."""
    if l < abs(m):
        raise ValueError("need l >= |m|")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    n = l - abs(m)
    return -gamma * gamma + (2 * n + 1) * gamma - 0.75 + m * m - 0.5 * n * (n + 1)


def boundary_parabolas(gamma: float, l_star: float):
    """Guide curves of the monodromy loop: (lower, upper) as functions of m.

    lower(m) = m^2 - gamma^2 is the critical-value parabola; upper(m) follows
    the row l = l_star of the small-gamma formula.  They meet at m = +-l_star.
    """
    if l_star <= 0:
        raise ValueError("l_star must be positive")

    def lower(m):
        return m * m - gamma * gamma

    def upper(m):
        return l_star * l_star - 0.5 * gamma * gamma - 0.5 * m * m * (gamma / l_star) ** 2

    return lower, upper


@dataclass(frozen=True)
class GapReport:
    regime: Regime
    l: int
    horizontal: float
    vertical: float
    horizontal_expected: float
    vertical_expected: float


def neighbor_gaps(spectrum, regime: Regime, l: int = 0) -> GapReport:
    """Horizontal and vertical neighbour gaps near m = 0.

    `spectrum` is anything with a `g(m, l)` lookup (a JointSpectrum).
    Bottom (large gamma): g_{l+1}^1 - g_l^0 ~ 1 and g_{l+2}^0 - g_l^0 ~ 4 gamma - (2l + 3),
    the difference of two large-gamma formula values.
    Top (small gamma): (g_l^0 + g_{l+2}^0)/2 - g_{l+1}^1 ~ 1 and g_{l+1}^1 - g_l^0 ~ 2(l+1).
    """
    g = spectrum.g
    gamma = spectrum.gamma
    try:
        if regime is Regime.LARGE_GAMMA:
            horizontal = g(1, l + 1) - g(0, l)
            vertical = g(0, l + 2) - g(0, l)
            expected = (1.0, 4 * gamma - (2 * l + 3))
        else:
            horizontal = 0.5 * (g(0, l) + g(0, l + 2)) - g(1, l + 1)
            vertical = g(1, l + 1) - g(0, l)
            expected = (1.0, 2.0 * (l + 1))
    except KeyError as exc:
        raise KeyError(f"spectrum lacks label {exc.args[0]} needed for the gap report") from None
    return GapReport(regime, l, horizontal, vertical, *expected)
