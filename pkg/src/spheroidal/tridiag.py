"""Symmetric tridiagonal eigensolvers: implicit-shift QL and Sturm bisection."""

from __future__ import annotations

import math

import numpy as np


class EigenNonConvergence(RuntimeError):
    pass


def _prepare(diag, offdiag):
    d = np.array(diag, dtype=float)
    n = d.size
    e = np.array(offdiag, dtype=float)
    if e.size == 0:
        e = np.zeros(max(n - 1, 0))
    if e.size != max(n - 1, 0):
        raise ValueError("offdiag must have length len(diag) - 1")
    return d, e


def eigen_tridiag(diag, offdiag, vectors: bool = True, max_iter: int = 60):
    """Eigen-decomposition of a symmetric tridiagonal matrix by implicit QL.

    Returns ascending eigenvalues and, if requested, the matrix whose columns
    are the matching orthonormal eigenvectors.  Raises EigenNonConvergence if
    any eigenvalue needs more than `max_iter` QL sweeps.
    """
    d_arr, e_in = _prepare(diag, offdiag)
    n = d_arr.size
    # python floats: scalar indexing of numpy arrays dominates the sweep cost otherwise
    d = d_arr.tolist()
    e = e_in.tolist() + [0.0]
    eps = float(np.finfo(float).eps)
    safmin = float(np.finfo(float).tiny)
    # zt[i] holds column i of the eigenvector matrix (contiguous rows are cheaper to rotate)
    zt = np.eye(n) if vectors else None
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                # second test: off-diagonals that square to below safmin next to a zero diagonal
                if abs(e[m]) <= eps * dd or e[m] * e[m] <= safmin:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                raise EigenNonConvergence(f"QL iteration cap hit at index {l}")
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if zt is not None:
                    zi, zi1 = zt[i], zt[i + 1]
                    zt[i], zt[i + 1] = c * zi - s * zi1, s * zi + c * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    d = np.array(d)
    order = np.argsort(d, kind="stable")
    if zt is None:
        return d[order]
    return d[order], zt[order].T.copy()


def sturm_count(diag, offdiag, x: float) -> int:
    """Number of eigenvalues strictly below x (LDL^T pivot sign count)."""
    d, e = _prepare(diag, offdiag)
    # pivots smaller than pivmin are replaced by -pivmin, which keeps e^2/q finite
    pivmin = np.finfo(float).tiny * max(1.0, float(np.max(e * e)) if e.size else 1.0)
    count = 0
    q = d[0] - x
    for i in range(d.size):
        if i:
            q = d[i] - x - e[i - 1] ** 2 / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


def sturm_bisection(diag, offdiag, tol: float = 1e-14) -> np.ndarray:
    """All eigenvalues by bisection on the Sturm count; slow, used as an oracle."""
    d, e = _prepare(diag, offdiag)
    n = d.size
    radius = np.abs(e)
    lo = np.min(d - np.r_[radius, 0.0] - np.r_[0.0, radius])
    hi = np.max(d + np.r_[radius, 0.0] + np.r_[0.0, radius])
    scale = max(abs(lo), abs(hi), 1.0)
    out = np.empty(n)
    for k in range(n):
        a, b = lo, hi
        while b - a > tol * scale:
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            if sturm_count(d, e, mid) > k:
                b = mid
            else:
                a = mid
        out[k] = 0.5 * (a + b)
    return out
