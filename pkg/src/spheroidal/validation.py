"""Numerical self-checks grouped into suites, reported as plain dictionaries."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import classical as cl
from .asymptotics import g_large_gamma, g_small_gamma
from .oracle import OracleConfig, fd_eigenvalues
from .spectral import SpheroidalParams, eigen_result, spheroidal_eigenvalues

SUITES = ("oracle", "asymptotics", "brackets")


@dataclass
class Check:
    name: str
    value: float
    threshold: float
    passed: bool
    detail: str = ""


def _check(name, value, threshold, detail="", below=True) -> Check:
    ok = value <= threshold if below else value >= threshold
    return Check(name, float(value), float(threshold), bool(ok), detail)


def oracle_suite(gammas=(1.0, 4.0, 16.0), ms=(0, 1, 2, 3), count: int = 10) -> list[Check]:
    """|g_spectral - g_fd| relative to the finite-difference error estimate (bound 3)."""
    checks = []
    for gamma in gammas:
        for m in ms:
            params = SpheroidalParams(m, gamma * gamma)
            spec = [r.g for r in spheroidal_eigenvalues(params, m + count - 1)]
            fd = fd_eigenvalues(params, count, OracleConfig(N=400, richardson_levels=2))
            ratio = max(abs(s - o.g) / o.error_estimate for s, o in zip(spec, fd))
            dev = max(abs(s - o.g) for s, o in zip(spec, fd))
            checks.append(_check(f"oracle gamma={gamma:g} m={m}", ratio, 3.0, f"max |dg| = {dev:.3e}"))
    return checks


def small_gamma_slope(m: int, gamma: float = 0.5, ls=range(10, 31)):
    """Least-squares slope of log|residual| against log l, with its standard error."""
    ls = np.array(list(ls))
    res = np.array([abs(eigen_result(int(l), m, gamma * gamma).g - g_small_gamma(int(l), m, gamma * gamma)) for l in ls])
    coef, cov = np.polyfit(np.log(ls), np.log(res), 1, cov=True)
    return float(coef[0]), float(math.sqrt(cov[0, 0]))


def large_gamma_ratio(n: int, m: int, g1: float = 16.0, g2: float = 32.0) -> float:
    """residual(g2) / residual(g1) for the large-gamma formula at l = |m| + n."""
    l = abs(m) + n
    r1 = abs(eigen_result(l, m, g1 * g1).g - g_large_gamma(l, m, g1))
    r2 = abs(eigen_result(l, m, g2 * g2).g - g_large_gamma(l, m, g2))
    return r2 / r1


def asymptotics_suite() -> list[Check]:
    checks = []
    for m in (0, 1):
        slope, err = small_gamma_slope(m)
        checks.append(Check(f"small-gamma slope m={m}", slope, -2.0, abs(slope + 2.0) <= 0.3,
                            f"slope {slope:.3f} +- {err:.3f} (target -2 +- 0.3)"))
    # g depends on |m| only, so m >= 0 covers |m| <= 2
    for m in (0, 1, 2):
        for n in range(4):
            ratio = large_gamma_ratio(n, m)
            checks.append(_check(f"large-gamma decay n={n} m={m}", ratio, 0.65, "residual(32)/residual(16)"))
    return checks


def brackets_suite(samples: int = 1000, seed: int = 20240501) -> list[Check]:
    """Residual maxima of the classical identities over random on-orbit states."""
    rng = np.random.default_rng(seed)
    params = cl.SystemParams(E=0.8, a=1.3)
    worst = dict.fromkeys(
        ["{G,Lz}", "reduced brackets", "syzygy", "round trip", "chart", "neumann bracket", "symmetry"], 0.0
    )
    for _ in range(samples):
        st = cl.random_state(rng, params)
        z = st.vector
        worst["{G,Lz}"] = max(worst["{G,Lz}"], abs(cl.poisson_bracket(lambda v: cl.G_value(v, params), cl.Lz_value, z)))
        worst["reduced brackets"] = max(worst["reduced brackets"], *map(abs, cl.reduced_brackets_check(st, params).values()))
        b = cl.reduce(st, params)
        worst["syzygy"] = max(worst["syzygy"], abs(cl.syzygy(b)))
        b2 = cl.reduce(cl.reconstruct(b, params, rng.uniform(0, 2 * np.pi)), params)
        worst["round trip"] = max(worst["round trip"], abs(b.b1 - b2.b1), abs(b.b2 - b2.b2), abs(b.b3 - b2.b3), abs(b.m - b2.m))
        c = cl.chart(b)
        worst["chart"] = max(worst["chart"], abs(cl.reduced_hamiltonian(c.q, c.p, b.m, params) - cl.G_value(z, params)))
        ns = cl.neumann_map(st, params)
        worst["neumann bracket"] = max(
            worst["neumann bracket"], float(np.max(np.abs(cl.pushforward_bracket(z, params) - cl.dirac_tensor(ns.x, ns.y))))
        )
        for which in ("S1", "S2", "S3"):
            s2 = cl.apply_discrete_symmetry(which, st)
            worst["symmetry"] = max(worst["symmetry"], abs(cl.G_value(s2.vector, params) - cl.G_value(z, params)),
                                    abs(s2.L[2] - st.L[2]))
    # pinched torus G = L_z = 0 on a grid of at least `samples` points per branch
    n = math.ceil(math.sqrt(samples))
    pz, phi = np.meshgrid(np.linspace(-params.radius, params.radius, n), np.linspace(0, 2 * np.pi, n))
    pinched = 0.0
    for sign in (1, -1):
        st = cl.pinched_torus(pz.ravel(), phi.ravel(), sign, params)
        z = np.vstack([st.P, st.L]).T
        pinched = max(pinched, float(np.max(np.abs(cl.G_value(z, params)))), float(np.max(np.abs(z[:, 5]))))
    worst["pinched torus"] = pinched
    t = np.linspace(-3.0, 3.0, samples)
    worst["heteroclinic"] = max(
        float(np.max(np.abs(cl.heteroclinic_residual(t, sign, c, params)))) for sign in (1, -1) for c in (0.0, 0.5)
    )
    bounds = {"chart": 1e-10, "neumann bracket": 1e-10}
    return [_check(k, v, bounds.get(k, 1e-12), f"{samples} samples") for k, v in worst.items()]


def run_suite(name: str) -> dict:
    if name == "all":
        parts = [run_suite(s) for s in SUITES]
        return {"suite": "all", "passed": all(p["passed"] for p in parts), "suites": parts}
    funcs = {"oracle": oracle_suite, "asymptotics": asymptotics_suite, "brackets": brackets_suite}
    if name not in funcs:
        raise ValueError(f"unknown suite {name!r}")
    checks = funcs[name]()
    return {"suite": name, "passed": all(c.passed for c in checks), "checks": [asdict(c) for c in checks]}
