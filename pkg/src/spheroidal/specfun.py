"""Associated Legendre (Ferrers) functions on [-1, 1] and Gauss-Legendre rules.

Condon-Shortley phase throughout, so P_1^1(x) = -sqrt(1 - x^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LegendreIndex:
    l: int
    m: int

    def __post_init__(self):
        if not (0 <= self.m <= self.l):
            raise ValueError(f"need 0 <= m <= l, got l={self.l}, m={self.m}")


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _as_index(idx) -> LegendreIndex:
    if isinstance(idx, LegendreIndex):
        return idx
    l, m = idx
    return LegendreIndex(int(l), int(m))


def _check_domain(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("associated Legendre functions are only evaluated on [-1, 1]")
    return x


def assoc_legendre(idx, x):
    """P_l^m(x) by upward recurrence in l from the closed-form P_m^m.

    `idx` is a LegendreIndex or an (l, m) pair; `x` may be a scalar or array.
    """
    idx = _as_index(idx)
    l, m = idx.l, idx.m
    x = _check_domain(x)
    s = np.sqrt((1.0 - x) * (1.0 + x))
    # P_m^m = (-1)^m (2m-1)!! (1-x^2)^(m/2)
    pmm = np.ones_like(x)
    for k in range(1, m + 1):
        pmm = -(2 * k - 1) * s * pmm
    if l == m:
        return pmm if pmm.ndim else float(pmm)
    p_prev, p = pmm, (2 * m + 1) * x * pmm
    for n in range(m + 1, l):
        p_prev, p = p, ((2 * n + 1) * x * p - (n + m) * p_prev) / (n - m + 1)
    return p if p.ndim else float(p)


def log_legendre_norm_sq(idx) -> float:
    """log of  int_{-1}^{1} (P_l^m)^2 dx = 2/(2l+1) (l+m)!/(l-m)!."""
    idx = _as_index(idx)
    l, m = idx.l, idx.m
    return math.log(2.0 / (2 * l + 1)) + math.lgamma(l + m + 1) - math.lgamma(l - m + 1)


def legendre_norm_sq(idx) -> float:
    val = log_legendre_norm_sq(idx)
    if val > 709.0:
        raise OverflowError("norm overflows a double; use log_legendre_norm_sq")
    return math.exp(val)


def normalized_legendre_table(l_max: int, m: int, x) -> np.ndarray:
    """Rows l = m..l_max of P_l^m(x) / sqrt(norm), each with unit L2 norm on [-1, 1].

    Stable for large m, where the unnormalized values overflow.
    """
    if m < 0 or l_max < m:
        raise ValueError("need 0 <= m <= l_max")
    x = _check_domain(np.atleast_1d(x))
    s = np.sqrt((1.0 - x) * (1.0 + x))
    out = np.empty((l_max - m + 1, x.size))
    p = np.full_like(x, math.sqrt(0.5))
    for k in range(1, m + 1):
        p = -math.sqrt((2 * k + 1) / (2.0 * k)) * s * p
    out[0] = p
    if l_max == m:
        return out
    out[1] = math.sqrt(2 * m + 3) * x * p
    for l in range(m + 2, l_max + 1):
        a = math.sqrt((4.0 * l * l - 1) / (l * l - m * m))
        b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1) ** 2 - 1))
        out[l - m] = a * (x * out[l - m - 1] - b * out[l - m - 2])
    return out


def gauss_legendre(n: int, tol: float = 1e-15, maxiter: int = 100) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [-1, 1] via Newton iteration on P_n."""
    if n < 1:
        raise ValueError("n must be positive")
    k = np.arange(1, n + 1)
    # Tricomi initial guess, descending order
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(maxiter):
        p0, p1 = np.ones_like(x), x.copy()
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < tol:
            break
    else:
        raise RuntimeError(f"Gauss-Legendre Newton iteration did not converge for n={n}")
    p0, p1 = np.ones_like(x), x.copy()
    for j in range(2, n + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    nodes, weights = x[order], w[order]
    if n % 2 == 1:
        nodes[n // 2] = 0.0
    # enforce exact antisymmetry of the nodes
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return QuadratureRule(nodes, weights)
