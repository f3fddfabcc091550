"""Cross-check the Legendre-basis eigenvalues against the finite-difference oracle.

The two routes share nothing but the differential equation: one diagonalises a
three-term recursion, the other discretises the ODE on a grid and extrapolates.

Run: python demos/oracle_check.py
"""

from __future__ import annotations

from spheroidal.oracle import fd_eigenvalues
from spheroidal.spectral import SpheroidalParams, spheroidal_eigenvalues

for gamma in (1.0, 4.0, 16.0):
    for m in (0, 3):
        params = SpheroidalParams(m, gamma * gamma)
        spec = spheroidal_eigenvalues(params, m + 4)
        fd = fd_eigenvalues(params, 5)
        print(f"gamma={gamma:4g} m={m}")
        for s, o in zip(spec, fd):
            print(f"   l={s.l:2d}  spectral {s.g:+.10f}  oracle {o.g:+.10f}  "
                  f"diff {abs(s.g - o.g):.1e}  estimate {o.error_estimate:.1e}")
