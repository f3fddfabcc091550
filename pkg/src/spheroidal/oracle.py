"""Finite-difference eigenvalues of the spheroidal operator, independent of the Legendre path.

With psi = (1 - eta^2)^{|m|/2} u and w = 1 - eta^2 the eigenproblem becomes

    -(w^{|m|+1} u')' + (|m|(|m|+1) - gamma^2 w) w^{|m|} u = g w^{|m|} u,

which has no m^2/w singularity.  A cell-centred grid eta_i = -1 + (i - 1/2) h
puts the flux points at the endpoints, where w^{|m|+1} vanishes, so no
boundary values are imposed.  The scheme is second order; eigenvalues from
N, 2N, 4N, ... are Richardson-extrapolated in h^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .spectral import SpheroidalParams


class OracleResolutionError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    N: int = 400
    richardson_levels: int = 2

    def __post_init__(self):
        if self.N < 50:
            raise ValueError("N must be at least 50")
        if self.richardson_levels < 1:
            raise ValueError("richardson_levels must be >= 1")


@dataclass(frozen=True)
class OracleEigenvalue:
    rank: int
    g: float
    error_estimate: float


def fd_matrix(params: SpheroidalParams, N: int):
    """Symmetric tridiagonal (diag, offdiag) of the discretized operator on N cells."""
    m = abs(params.m)
    h = 2.0 / N
    eta = -1.0 + (np.arange(1, N + 1) - 0.5) * h
    w = (1.0 - eta) * (1.0 + eta)
    half = -1.0 + np.arange(0, N + 1) * h
    flux = ((1.0 - half) * (1.0 + half)) ** (m + 1)
    flux[0] = flux[-1] = 0.0
    weight = w**m
    diag = (flux[1:] + flux[:-1]) / (h * h * weight) + m * (m + 1) - params.gamma2 * w
    off = -flux[1:-1] / (h * h * np.sqrt(weight[:-1] * weight[1:]))
    return diag, off


def fd_raw_eigenvalues(params: SpheroidalParams, count: int, N: int) -> np.ndarray:
    diag, off = fd_matrix(params, N)
    return eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, count - 1))


def fd_eigenvalues(params: SpheroidalParams, count: int, cfg: OracleConfig | None = None):
    """Lowest `count` eigenvalues of G with Richardson error estimates.

    Grids N, 2N, ..., 2^levels N.  The error estimate is the change made by
    the last extrapolation step plus a rounding floor scaled by the matrix
    norm.  Raises OracleResolutionError when successive grid differences are
    not consistent with h^2 convergence (under-resolved eigenfunctions).
    """
    cfg = cfg or OracleConfig()
    if count < 1:
        raise ValueError("count must be >= 1")
    levels = cfg.richardson_levels
    grids = [cfg.N * 2**k for k in range(levels + 1)]
    raw = np.array([fd_raw_eigenvalues(params, count, n) for n in grids])

    diffs = raw[:-1] - raw[1:]
    if levels >= 2:
        ratio = diffs[:-1] / np.where(diffs[1:] == 0, np.nan, diffs[1:])
        # monotone and contracting; the h^2 coefficient can be small, so large ratios are fine
        bad = ~(ratio > 1.5)
        # differences at rounding level carry no convergence information
        tiny = np.abs(diffs[1:]) < 1e-9 * np.maximum(1.0, np.abs(raw[-1]))
        if np.any(bad & ~tiny):
            raise OracleResolutionError(
                f"non-monotone extrapolation for m={params.m}, gamma2={params.gamma2}; "
                f"grid ratios {ratio}"
            )

    table = [raw]
    for k in range(1, levels + 1):
        prev = table[-1]
        f = 4.0**k
        table.append((f * prev[1:] - prev[:-1]) / (f - 1.0))
    best = table[-1][-1]
    change = np.abs(table[-1][-1] - table[-2][-1])

    diag, off = fd_matrix(params, grids[-1])
    norm = np.max(np.abs(diag)) + 2.0 * np.max(np.abs(off))
    floor = 64.0 * np.finfo(float).eps * norm
    est = change + floor
    return [OracleEigenvalue(rank=k, g=float(best[k]), error_estimate=float(est[k])) for k in range(count)]


def rank_to_label(m: int, rank: int) -> int:
    """Ground state for fixed m is l = |m|; ranks count up from there across both parities."""
    if rank < 0:
        raise ValueError("rank must be >= 0")
    return abs(m) + rank
