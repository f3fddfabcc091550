"""The classical system: critical points, the pinched torus, actions and the Neumann map.

Run: python demos/classical.py
"""

from __future__ import annotations

import math

import numpy as np

from spheroidal import classical as cl

params = cl.SystemParams.from_gamma(4.0)
print(f"E={params.E}, a={params.a:.6f}, gamma={params.gamma:g}")

# the poles are focus-focus points, the equator orbits elliptic-transversal
pole = cl.classify_critical_point(cl.pole_state(params), params, beta=1.0)
print(f"pole: {pole.kind.value}  " + " ".join(f"{z:.4f}" for z in pole.eigenvalues if abs(z) > 1e-6))
eq = cl.classify_critical_point(cl.equator_state(params, 2.0), params)
print(f"equator m=2: {eq.kind.value}  beta={eq.beta:g}  "
      + " ".join(f"{z:.4f}" for z in eq.eigenvalues if abs(z) > 1e-6)
      + f"  (sqrt(m^2+gamma^2) = {math.sqrt(4 + params.gamma2):.4f})")

# the singular fibre over (0, 0) is a torus pinched at both poles
pz, phi = np.meshgrid(np.linspace(-params.radius, params.radius, 50), np.linspace(0, 2 * math.pi, 50))
st = cl.pinched_torus(pz.ravel(), phi.ravel(), 1, params)
z = np.vstack([st.P, st.L]).T
print(f"pinched torus: max |G| = {np.max(np.abs(cl.G_value(z, params))):.1e}, max |L_z| = {np.max(np.abs(z[:, 5])):.1e}")

# a G-flow keeps every invariant to RK4 accuracy
traj = cl.integrate_flow(cl.random_state(np.random.default_rng(1), params), "G", 20.0, 1e-3, params, record_every=100)
print(f"G-flow t=20: max invariant drift {traj.max_drift():.1e}")

# the action on the focus-focus level is 2 gamma/pi; it vanishes at the parabola
print(f"I(0,0) = {cl.action_I(0, 0, params):.12f}, 2 gamma/pi = {2 * params.gamma / math.pi:.12f}")
for d in (4.0, 1.0, 0.01):
    print(f"   I(0, -gamma^2 + {d:g}) = {cl.action_I(0, -params.gamma2 + d, params):.6f}")

# the Neumann map sends (P, L) to the unit sphere's cotangent bundle
s = cl.random_state(np.random.default_rng(2), params)
ns = cl.neumann_map(s, params)
print(f"Neumann: |x|={np.linalg.norm(ns.x):.15f}, x.y={ns.x @ ns.y:.1e}, "
      f"2 G_N - G = {2 * cl.neumann_G(ns, params) - cl.G_value(s.vector, params):.1e}, L_N - l_z = {cl.neumann_L(ns) - s.L[2]:.1e}")
