"""The joint spectrum (m, g) at gamma = 16 and how it deforms from the spherical case.

Run: python demos/spectrum.py   (figure goes to $SPHEROIDAL_OUT or the working directory)
"""

from __future__ import annotations

import math

from spheroidal.cli import spectrum_svg
from spheroidal.lattice import build_joint_spectrum, count_negative
from spheroidal.spectral import eigen_result
from spheroidal.textio import atomic_write, default_out_dir

# at gamma = 0 every column is the same ladder l(l+1)
for l in range(4):
    print(f"gamma=0  l={l}  g={eigen_result(l, 0, 0.0).g:g}")

# switching on gamma pulls the low states down to the parabola g = m^2 - gamma^2
gamma = 16.0
sp = build_joint_spectrum(gamma, 20, 40)
print(f"\n{len(sp)} points at gamma={gamma:g}")
for m in (0, 5, 10):
    labels, vals = sp.column(m)
    print(f"m={m:2d}  lowest g={vals[0]:10.4f}  parabola m^2-gamma^2={m * m - gamma * gamma:8.1f}")

# the number of negative m = 0 states grows like 2 gamma / pi
print(f"\nnegative m=0 states: {count_negative(sp)}  (2 gamma/pi = {2 * gamma / math.pi:.2f})")

path = atomic_write(default_out_dir() / "demo_spectrum_gamma16.svg", spectrum_svg(sp, gamma))
print(f"wrote {path}")
