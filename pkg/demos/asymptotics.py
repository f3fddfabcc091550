"""Small- and large-gamma formulas against the exact eigenvalues.

Run: python demos/asymptotics.py
"""

from __future__ import annotations

from spheroidal.asymptotics import Regime, g_large_gamma, g_small_gamma, neighbor_gaps
from spheroidal.lattice import build_joint_spectrum
from spheroidal.spectral import eigen_result
from spheroidal.validation import small_gamma_slope

# small gamma: the residual falls off like 1/l^2 at fixed gamma
for l in (10, 20, 30):
    exact = eigen_result(l, 0, 0.25).g
    print(f"gamma=0.5 l={l}  residual {exact - g_small_gamma(l, 0, 0.25):+.3e}")
slope, err = small_gamma_slope(0)
print(f"log-log slope {slope:.3f} +- {err:.3f}\n")

# large gamma: the residual is O(1/gamma), but its leading coefficient can be
# small enough that the next order dominates at moderate gamma
for n, m in ((0, 0), (2, 0), (2, 1)):
    l = m + n
    row = [eigen_result(l, m, g * g).g - g_large_gamma(l, m, g) for g in (16.0, 32.0, 64.0, 128.0)]
    print(f"n={n} m={m}  residuals " + "  ".join(f"{r:+.3e}" for r in row))

# neighbour gaps: one unit horizontally at both ends of the spectrum
bottom = neighbor_gaps(build_joint_spectrum(32.0, 1, 4), Regime.LARGE_GAMMA)
top = neighbor_gaps(build_joint_spectrum(0.5, 1, 22), Regime.SMALL_GAMMA, l=20)
print(f"\nbottom gaps at gamma=32: horizontal {bottom.horizontal:.4f}, vertical {bottom.vertical:.3f} "
      f"(expected {bottom.vertical_expected:g})")
print(f"top gaps at gamma=0.5, l=20: horizontal {top.horizontal:.4f}, vertical {top.vertical:.3f}")
