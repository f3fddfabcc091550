"""One test per acceptance criterion; each records a single pass/fail line."""

from __future__ import annotations

import math
import time

import numpy as np

from spheroidal import classical as cl
from spheroidal import spectral
from spheroidal.asymptotics import Regime, boundary_parabolas, neighbor_gaps
from spheroidal.lattice import (
    UnitCell,
    build_joint_spectrum,
    count_negative,
    filter_symmetry,
    initial_cell,
    l_star_for,
    monodromy,
    transport_cell,
)
from spheroidal.spectral import SpheroidalParams, spheroidal_eigenvalues
from spheroidal.validation import brackets_suite, large_gamma_ratio, oracle_suite, small_gamma_slope


def test_criterion_01_spherical_limit(record):
    t0 = time.perf_counter()
    worst = 0.0
    for m in range(31):
        for r in spheroidal_eigenvalues(SpheroidalParams(m, 0.0), 30):
            worst = max(worst, abs(r.g - r.l * (r.l + 1)))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 5.0
    record(1, ok, f"max |g - l(l+1)| = {worst:.2e} (< 1e-10), {elapsed:.2f} s (< 5 s)")
    assert ok


def test_criterion_02_oracle_equivalence(record):
    t0 = time.perf_counter()
    checks = oracle_suite(gammas=(1.0, 4.0, 16.0), ms=(0, 1, 2, 3), count=10)
    elapsed = time.perf_counter() - t0
    worst = max(c.value for c in checks)
    ok = all(c.passed for c in checks) and elapsed < 60.0
    record(2, ok, f"max |dg| / error estimate = {worst:.3f} (<= 3) over 12 cases, {elapsed:.1f} s (< 60 s)")
    assert ok


def test_criterion_03_small_gamma_slope(record):
    slopes = {m: small_gamma_slope(m, gamma=0.5, ls=range(10, 31)) for m in (0, 1)}
    ok = all(abs(s + 2.0) <= 0.3 for s, _ in slopes.values())
    detail = ", ".join(f"m={m}: {s:.3f} +- {e:.3f}" for m, (s, e) in slopes.items())
    record(3, ok, f"log-log slopes {detail} (target -2 +- 0.3)")
    assert ok


def test_criterion_04_large_gamma_decay(record):
    ratios = {(n, m): large_gamma_ratio(n, m, 16.0, 32.0) for m in (0, 1, 2) for n in range(4)}
    bad = {k: v for k, v in ratios.items() if not v <= 0.65}
    worst = max(ratios, key=ratios.get)
    ok = not bad
    detail = f"worst residual(32)/residual(16) = {ratios[worst]:.3f} at (l-|m|, |m|) = {worst} (<= 0.65)"
    if bad:
        detail += f"; failing cases {sorted(bad)}"
    record(4, ok, detail)
    assert ok, detail


def test_criterion_05_monodromy(record):
    # drop cached eigenvalue blocks so the timing includes the spectrum build
    spectral._parity_block.cache_clear()
    t0 = time.perf_counter()
    ls = l_star_for(16.0)
    sp = build_joint_spectrum(16.0, ls + 2, 2 * ls + 4)
    full = monodromy(sp).matrix.tolist()
    classes = {s: monodromy(filter_symmetry(sp, s)).matrix.tolist() for s in ("s2even", "s2odd")}
    elapsed = time.perf_counter() - t0

    lower, _ = boundary_parabolas(16.0, ls)
    beside = [(m, lower(m)) for m in range(4, 11)] + [(10, 50.0)] + [(m, 50.0) for m in range(9, 3, -1)]
    beside.append((4, lower(4)))
    g_lo, g_hi = sp.g(2, 30) - 5.0, sp.g(2, 36)
    labels, vals = sp.column(2)
    upper_loop = [(2, g_lo), (3, g_lo), (4, g_lo), (4, g_hi), (3, g_hi), (2, g_hi), (2, g_lo)]
    trivial = [
        transport_cell(sp, beside, initial_cell(sp, 4)).matrix.tolist(),
        transport_cell(sp, upper_loop, UnitCell.T(int(labels[np.argmin(np.abs(vals - g_lo))]), 2)).matrix.tolist(),
    ]
    ok = (
        full == [[1, 0], [2, 1]]
        and all(v == [[1, 0], [1, 1]] for v in classes.values())
        and all(t == [[1, 0], [0, 1]] for t in trivial)
        and elapsed < 120.0
    )
    record(5, ok, f"full {full}, s2even {classes['s2even']}, s2odd {classes['s2odd']}, "
                  f"non-enclosing loops identity: {all(t == [[1, 0], [0, 1]] for t in trivial)}, {elapsed:.1f} s (< 120 s)")
    assert ok


def test_criterion_06_weyl_count(record):
    n16 = count_negative(build_joint_spectrum(16.0, 0, 30))
    n8 = count_negative(build_joint_spectrum(8.0, 0, 20))
    ok = n16 in (10, 11) and abs(n8 - 16 / math.pi) <= 1
    record(6, ok, f"#negative at gamma=16: {n16} (10 or 11); at gamma=8: {n8} (2 gamma/pi = {16 / math.pi:.3f} +- 1)")
    assert ok


def test_criterion_07_neighbor_gaps(record):
    bottom = neighbor_gaps(build_joint_spectrum(32.0, 1, 2), Regime.LARGE_GAMMA, l=0).horizontal
    top = neighbor_gaps(build_joint_spectrum(0.5, 1, 22), Regime.SMALL_GAMMA, l=20).horizontal
    ok = abs(bottom - 1) < 0.1 and abs(top - 1) < 0.1
    record(7, ok, f"g_1^1 - g_0^0 at gamma=32: {bottom:.4f}; midpoint gap at gamma=0.5, l=20: {top:.4f} (1 +- 0.1)")
    assert ok


def test_criterion_08_action(record):
    errs = {g: abs(cl.action_I(0.0, 0.0, cl.SystemParams.from_gamma(g)) - 2 * g / math.pi) for g in (4.0, 16.0, 32.0)}
    monotone = True
    for g in (4.0, 16.0, 32.0):
        p = cl.SystemParams.from_gamma(g)
        g0 = -p.gamma2
        vals = [cl.action_I(0.0, g0 + d, p) for d in np.geomspace(g * g, 1e-8, 10)]
        monotone &= bool(np.all(np.diff(vals) < 0)) and vals[-1] < 1e-3
    worst = max(errs.values())
    ok = worst < 1e-8 and monotone
    record(8, ok, f"max |I(0,0) - 2 gamma/pi| = {worst:.2e} (< 1e-8); monotone approach to the parabola: {monotone}")
    assert ok


def test_criterion_09_classification(record):
    worst = 0.0
    kinds = []
    for E, a, beta in ((1.0, 1.0, 1.0), (2.0, 3.0, 0.5)):
        p = cl.SystemParams(E, a)
        res = cl.classify_critical_point(cl.pole_state(p), p, beta=beta)
        kinds.append(res.kind is cl.CriticalKind.FOCUS_FOCUS)
        alpha = a * math.sqrt(2 * E)
        got = [z for z in res.eigenvalues if abs(z) > 1e-6]
        want = [complex(sr * alpha, si * beta) for sr in (1, -1) for si in (1, -1)]
        kinds.append(len(got) == 4)
        worst = max(worst, max(min(abs(w - z) for z in got) for w in want))
    p = cl.SystemParams(0.8, 1.3)
    for m in (0.0, 1.0, 2.0):
        res = cl.classify_critical_point(cl.equator_state(p, m), p)
        kinds.append(res.kind is cl.CriticalKind.ELLIPTIC_TRANSVERSAL)
        got = [z for z in res.eigenvalues if abs(z) > 1e-6]
        w = math.sqrt(m * m + p.gamma2)
        kinds.append(len(got) == 2)
        worst = max(worst, max(min(abs(t - z) for z in got) for t in (1j * w, -1j * w)))
    ok = worst < 1e-8 and all(kinds)
    record(9, ok, f"max eigenvalue error {worst:.2e} (< 1e-8); kinds as expected: {all(kinds)}")
    assert ok


def test_criterion_10_property_suites(record):
    t0 = time.perf_counter()
    checks = brackets_suite(samples=1000)
    elapsed = time.perf_counter() - t0
    ok = all(c.passed for c in checks) and elapsed < 30.0
    detail = ", ".join(f"{c.name} {c.value:.1e}" for c in checks)
    record(10, ok, f"1000 samples each: {detail}; {elapsed:.1f} s (< 30 s)")
    assert ok
