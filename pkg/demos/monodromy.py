"""Carry a unit cell around the origin of the joint spectrum and read off the monodromy.

Run: python demos/monodromy.py
"""

from __future__ import annotations

from spheroidal.cli import monodromy_svg
from spheroidal.lattice import (
    build_joint_spectrum,
    filter_symmetry,
    junction_compare,
    l_star_for,
    monodromy,
    monodromy_loop,
)
from spheroidal.textio import atomic_write, default_out_dir

gamma = 16.0
l_star = l_star_for(gamma)
sp = build_joint_spectrum(gamma, l_star + 2, 2 * l_star + 4)

# the bottom and top half-paths meet at m = l* - 1 with labels shifted by one
rep = junction_compare(sp)
print(f"junction at m={l_star - 1}: B ends at {rep.b_cell.corners}, T ends at {rep.t_cell.corners}, shift {rep.shift}")

res = monodromy(sp)
print(f"full lattice: matrix {res.matrix.tolist()}, k = {res.index}")
for sel in ("s2even", "s2odd"):
    r = monodromy(filter_symmetry(sp, sel))
    print(f"{sel:7s}: matrix {r.matrix.tolist()}, k = {r.index}")

rev = monodromy(sp, reverse=True)
print(f"reversed loop acts as {rev.label_map.tolist()}, the inverse of {res.label_map.tolist()}")

loop = monodromy_loop(gamma, l_star)
path = atomic_write(default_out_dir() / "demo_monodromy_gamma16.svg", monodromy_svg(sp, loop, res))
print(f"wrote {path}")
