"""Prolate angular spheroidal eigenvalues g_l^m and wave functions Ps_l^m.

The operator is

    G = -d/deta (1 - eta^2) d/deta + m^2 / (1 - eta^2) - gamma^2 (1 - eta^2)

on eta in [-1, 1].  Eigenfunctions are expanded in associated Legendre
functions P_{|m|+k}^{|m|}, k restricted to one parity class, which turns the
problem into a three-term recursion for the expansion coefficients.  The
recursion is the standard one for the equation with +c^2 eta^2; it yields the
classical eigenvalue lambda, and g = lambda - gamma^2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .specfun import log_legendre_norm_sq, normalized_legendre_table
from .tridiag import eigen_tridiag


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1

    @classmethod
    def of(cls, l: int, m: int) -> "Parity":
        return cls((l - abs(m)) % 2)


@dataclass(frozen=True)
class SpheroidalParams:
    m: int
    gamma2: float

    def __post_init__(self):
        if self.gamma2 < 0:
            raise ValueError("gamma2 < 0 is the oblate case, which is not supported")

    @property
    def gamma(self) -> float:
        return math.sqrt(self.gamma2)


@dataclass(frozen=True)
class SpectralConfig:
    eig_tol: float = 1e-11
    tail_tol: float = 1e-13
    K_max: int = 2000

    def __post_init__(self):
        if self.eig_tol <= 0 or self.tail_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class EigenResult:
    l: int
    m: int
    g: float
    # coefficients of the unit-norm Legendre functions P_{|m|+k}^{|m|}/sqrt(N),
    # k = parity, parity + 2, ...
    coeffs: np.ndarray

    @property
    def parity(self) -> Parity:
        return Parity.of(self.l, self.m)

    @property
    def d(self) -> np.ndarray:
        """Coefficients d_k of the unnormalized P_{|m|+k}^{|m|}."""
        am = abs(self.m)
        k0 = self.parity.value
        lognorm = np.array(
            [log_legendre_norm_sq((am + k0 + 2 * j, am)) for j in range(self.coeffs.size)]
        )
        return self.coeffs * np.exp(-0.5 * lognorm)


class SpectralConvergenceError(RuntimeError):
    pass


def recursion_coefficients(m: int, gamma2: float, r):
    """(alpha_r, beta_r, gamma_r) of the three-term recursion for d_r.

    alpha_r d_{r+2} + (beta_r - lambda) d_r + gamma_r d_{r-2} = 0.
    """
    m = abs(m)
    r = np.asarray(r, dtype=float)
    n = m + r
    alpha = (2 * m + r + 2) * (2 * m + r + 1) * gamma2 / ((2 * n + 3) * (2 * n + 5))
    beta = n * (n + 1) + (2 * n * (n + 1) - 2 * m * m - 1) * gamma2 / ((2 * n - 1) * (2 * n + 3))
    gam = r * (r - 1) * gamma2 / ((2 * n - 3) * (2 * n - 1))
    return alpha, beta, gam


def build_recursion_matrix(params: SpheroidalParams, parity: Parity, K: int):
    """Symmetric tridiagonal form of the recursion, size K, on one parity class.

    Returns (diag, offdiag).  The nonsymmetric recursion matrix is symmetrized
    by the diagonal similarity sqrt(norm of P_{|m|+r}^{|m|}).
    """
    if K < 2:
        raise ValueError("K must be at least 2")
    m = abs(params.m)
    r = parity.value + 2 * np.arange(K)
    alpha, beta, _ = recursion_coefficients(m, params.gamma2, r)
    lognorm = np.array([log_legendre_norm_sq((m + rr, m)) for rr in r])
    # T[j, j+1] = alpha_r sqrt(N_r / N_{r+2})
    off = alpha[:-1] * np.exp(0.5 * (lognorm[:-1] - lognorm[1:]))
    return beta, off


def _initial_K(m: int, l_max: int, gamma: float) -> int:
    return (l_max - abs(m)) // 2 + max(20, math.ceil(2 * gamma))


def _fix_sign(vecs: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


@lru_cache(maxsize=512)
def _parity_block(m: int, gamma2: float, parity: Parity, count: int, cfg: SpectralConfig):
    """Lowest `count` eigenpairs of one parity block, truncation grown until converged."""
    gamma = math.sqrt(gamma2)
    K = max(count, 2) + max(20, math.ceil(2 * gamma))
    prev = None
    while True:
        if K > cfg.K_max:
            raise SpectralConvergenceError(
                f"no convergence below K_max={cfg.K_max} (m={m}, gamma2={gamma2})"
            )
        diag, off = build_recursion_matrix(SpheroidalParams(m, gamma2), parity, K)
        w, V = eigen_tridiag(diag, off)
        w, V = w[:count], _fix_sign(V[:, :count])
        tail = np.max(np.abs(V[-2:, :]), axis=0) / np.max(np.abs(V), axis=0)
        if prev is not None:
            shift = np.abs(w - prev)
            if np.all(shift < cfg.eig_tol * np.maximum(1.0, np.abs(w))) and np.all(
                tail < cfg.tail_tol
            ):
                w.setflags(write=False)
                V.setflags(write=False)
                return w, V
        prev = w
        K += 10


def spheroidal_eigenvalues(params: SpheroidalParams, l_max: int, cfg: SpectralConfig | None = None):
    """EigenResults for l = |m|, ..., l_max, ordered by l.

    Within each parity class of l - |m| the j-th eigenvalue gets the label
    l = |m| + parity + 2j, which continues the spherical labelling g = l(l+1).
    Convergence: relative eigenvalue shift under K -> K+10 below eig_tol and
    the last retained coefficients below tail_tol relative to the largest.
    """
    cfg = cfg or SpectralConfig()
    m = abs(params.m)
    if l_max < m:
        raise ValueError("l_max must be >= |m|")
    n = l_max - m + 1
    out: list[EigenResult | None] = [None] * n
    for parity in Parity:
        count = (n - parity.value + 1) // 2
        if count == 0:
            continue
        w, V = _parity_block(m, float(params.gamma2), parity, count, cfg)
        for j in range(count):
            k = parity.value + 2 * j
            # the parity block result is shared through the cache; coefficients are read-only views
            out[k] = EigenResult(l=m + k, m=params.m, g=float(w[j] - params.gamma2), coeffs=V[:, j])
    return out


def eigen_result(l: int, m: int, gamma2: float, cfg: SpectralConfig | None = None) -> EigenResult:
    cfg = cfg or SpectralConfig()
    if l < abs(m):
        raise ValueError("need l >= |m|")
    parity = Parity.of(l, m)
    j = (l - abs(m)) // 2
    w, V = _parity_block(abs(m), float(gamma2), parity, j + 1, cfg)
    return EigenResult(l=l, m=m, g=float(w[j] - gamma2), coeffs=V[:, j])


def eval_ps(l: int, m: int, params: SpheroidalParams | float, eta, cfg: SpectralConfig | None = None):
    """Ps_l^m(gamma, eta), normalized so that int Ps^2 deta = 1.

    `params` may be a SpheroidalParams (its m is ignored) or gamma^2 directly.
    With this normalization Z = Ps e^{i m phi} / sqrt(2 pi) has unit norm on the sphere.
    """
    gamma2 = params.gamma2 if isinstance(params, SpheroidalParams) else float(params)
    res = eigen_result(l, m, gamma2, cfg)
    am = abs(m)
    k0 = res.parity.value
    eta_arr = np.atleast_1d(np.asarray(eta, dtype=float))
    table = normalized_legendre_table(am + k0 + 2 * (res.coeffs.size - 1), am, eta_arr)
    vals = res.coeffs @ table[k0::2]
    return vals if np.ndim(eta) else float(vals[0])


def eval_Z(l: int, m: int, params: SpheroidalParams | float, theta, phi, cfg: SpectralConfig | None = None):
    """Spheroidal harmonic Z_l^m(theta, phi) = Ps_l^m(cos theta) e^{i m phi} / sqrt(2 pi)."""
    ps = eval_ps(l, m, params, np.cos(theta), cfg)
    return ps * np.exp(1j * m * np.asarray(phi)) / math.sqrt(2.0 * math.pi)


def symmetry_class(l: int, m: int):
    """(parity of l - m, parity of m, S2-invariant) with parities as 'even'/'odd'.

    Z_l^m is invariant under S2 when l - m and m are both even or both odd.
    """
    if l < abs(m):
        raise ValueError("need l >= |m|")
    plm = (l - m) % 2
    pm = m % 2
    name = ("even", "odd")
    return name[plm], name[pm], plm == pm
