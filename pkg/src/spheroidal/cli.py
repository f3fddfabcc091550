"""Command-line front end: spectrum, monodromy, classical and validate.

Exit codes: 0 success, 1 validation failure, 2 solver failure,
3 transport ambiguity, 4 bad flags.  Output files go to --out, or to the
directory named by $SPHEROIDAL_OUT, or the working directory.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import classical as cl
from .lattice import (
    TransportError,
    build_joint_spectrum,
    count_negative,
    filter_symmetry,
    initial_cell,
    l_star_for,
    monodromy_loop,
    monodromy_report,
    spectrum_csv,
    transport_cell,
)
from .oracle import OracleResolutionError
from .spectral import SpectralConvergenceError
from .svg import Figure, padded
from .textio import atomic_write, default_out_dir, dumps_json, fmt
from .tridiag import EigenNonConvergence
from .validation import run_suite

EXIT_OK, EXIT_FAILED, EXIT_SOLVER, EXIT_TRANSPORT, EXIT_FLAGS = 0, 1, 2, 3, 4

# fewer negative m = 0 states than this leaves no room for a loop below the origin
MIN_NEGATIVE_STATES = 2

SYMMETRY_CHOICES = ("all", "s2even", "s2odd", "even-even", "even-odd", "odd-even", "odd-odd")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_FLAGS)


def _tag(x: float) -> str:
    return format(float(x), "g").replace(".", "p").replace("-", "m")


def _out_dir(args) -> Path:
    return Path(args.out) if args.out else default_out_dir()


def _write(args, name: str, text: str) -> Path:
    path = atomic_write(_out_dir(args) / name, text)
    print(f"wrote {path}")
    return path


# --- spectrum ----------------------------------------------------------------


def spectrum_svg(spectrum, gamma: float) -> str:
    h = spectrum.hbar
    pts = np.array(spectrum.scaled())
    xs, ys = pts[:, 0], pts[:, 1]
    fig = Figure(padded(xs.min(), xs.max()), padded(ys.min(), ys.max()),
                 title=f"joint spectrum, gamma = {gamma:g}", xlabel="hbar m" if h != 1 else "m",
                 ylabel="hbar^2 g" if h != 1 else "g")
    mm = np.linspace(xs.min() / h, xs.max() / h, 200)
    fig.polyline(h * mm, h * h * (mm * mm - gamma * gamma), color="red")
    fig.scatter(xs, ys, r=1.5)
    return fig.render()


def cmd_spectrum(args) -> int:
    if args.mmax < 0 or args.lmax < args.mmax:
        raise UsageError("need lmax >= mmax >= 0")
    if args.gamma < 0:
        raise UsageError("gamma must be non-negative")
    spec = build_joint_spectrum(args.gamma, args.mmax, args.lmax, hbar=args.hbar)
    stem = f"spectrum_gamma{_tag(args.gamma)}"
    _write(args, stem + ".csv", spectrum_csv(spec))
    if not args.no_svg:
        _write(args, stem + ".svg", spectrum_svg(spec, args.gamma))
    return EXIT_OK


# --- monodromy ---------------------------------------------------------------


def monodromy_svg(spectrum, loop, result) -> str:
    ms = np.array([m for m, _ in spectrum.points])
    gs = np.array(list(spectrum.points.values()))
    lo_loop = min(g for _, g in loop)
    hi_loop = max(g for _, g in loop)
    keep = (gs <= hi_loop + 0.3 * (hi_loop - lo_loop))
    fig = Figure(padded(ms.min(), ms.max()), padded(min(lo_loop, gs.min()), gs[keep].max()),
                 title=f"unit cell transport, gamma = {spectrum.gamma:g}, k = {result.index}",
                 xlabel="m", ylabel="g")
    fig.scatter(ms[keep], gs[keep], r=1.2, color="gray")
    fig.polyline([m for m, _ in loop], [g for _, g in loop], color="red", width=1.5)
    for cell in result.trace:
        xs = [c[0] for c in cell.corners]
        ys = [spectrum.g(*c) for c in cell.corners]
        fig.polyline(xs, ys, color="blue", width=0.6, closed=True)
    return fig.render()


def cmd_monodromy(args) -> int:
    if args.gamma <= 0:
        raise UsageError("gamma must be positive")
    l_star = args.lstar or l_star_for(args.gamma)
    full = build_joint_spectrum(args.gamma, l_star + 2, 2 * l_star + 4)
    neg = count_negative(full)
    if neg < MIN_NEGATIVE_STATES:
        raise UsageError(
            f"loop not constructible at gamma={args.gamma:g}: only {neg} negative m=0 state(s), "
            f"need {MIN_NEGATIVE_STATES}"
        )
    spec = filter_symmetry(full, args.symmetry)
    loop = monodromy_loop(args.gamma, l_star, spec.column_period)
    result = transport_cell(spec, loop, initial_cell(spec, 0))
    stem = f"monodromy_gamma{_tag(args.gamma)}_{args.symmetry}"
    _write(args, stem + ".json", monodromy_report(args.gamma, l_star, result, loop))
    if not args.no_svg:
        _write(args, stem + ".svg", monodromy_svg(spec, loop, result))
    print(f"matrix {result.matrix.tolist()} index {result.index}")
    return EXIT_OK


# --- classical ---------------------------------------------------------------


def _params(args) -> cl.SystemParams:
    if getattr(args, "gamma", None) is not None:
        return cl.SystemParams.from_gamma(args.gamma, args.E)
    return cl.SystemParams(args.E, args.a)


def cmd_classical(args) -> int:
    params = _params(args)
    what = args.what
    if what == "bifurcation":
        ms = np.linspace(-args.mrange, args.mrange, args.samples)
        _write(args, f"bifurcation_gamma{_tag(params.gamma)}.csv", cl.critical_values(params, ms).to_csv())
    elif what == "orbit":
        if args.state:
            st = cl.EuclideanState.from_vector(np.array(args.state, dtype=float))
        else:
            st = cl.random_state(np.random.default_rng(args.seed), params)
        traj = cl.integrate_flow(st, args.hamiltonian, args.t, args.dt, params, record_every=args.every)
        _write(args, f"orbit_{args.hamiltonian}.csv", traj.to_csv())
        print(f"max invariant drift {fmt(traj.max_drift())}")
    elif what == "action":
        val = cl.action_I(args.m, args.g, params)
        doc = {"m": args.m, "g": args.g, "gamma": params.gamma, "action": val}
        _write(args, f"action_m{_tag(args.m)}_g{_tag(args.g)}.json", dumps_json(doc))
        print(fmt(val))
    elif what == "classify":
        if args.point == "pole":
            st = cl.pole_state(params)
        else:
            st = cl.equator_state(params, args.m)
        c = cl.classify_critical_point(st, params, beta=args.beta)
        doc = {
            "point": args.point,
            "kind": c.kind.value,
            "beta": c.beta,
            "residual": c.residual,
            "eigenvalues": [[z.real, z.imag] for z in c.eigenvalues],
        }
        _write(args, f"classify_{args.point}.json", dumps_json(doc))
        print(c.kind.value)
        for z in c.eigenvalues:
            print(f"  {fmt(z.real)} {fmt(z.imag)}i")
    elif what == "pinched":
        pz = np.linspace(-params.radius, params.radius, args.samples)
        phi = np.linspace(0.0, 2 * math.pi, args.samples, endpoint=False)
        PZ, PHI = np.meshgrid(pz, phi, indexing="ij")
        rows = ["sign,pz,phi,px,py,lx,ly,lz,G,Lz"]
        for sign in (1, -1):
            st = cl.pinched_torus(PZ.ravel(), PHI.ravel(), sign, params)
            z = np.vstack([st.P, st.L]).T
            G = cl.G_value(z, params)
            for i in range(z.shape[0]):
                vals = [PZ.ravel()[i], PHI.ravel()[i], z[i, 0], z[i, 1], z[i, 3], z[i, 4], z[i, 5], G[i], z[i, 5]]
                rows.append(",".join([str(sign)] + [fmt(v) for v in vals]))
        _write(args, "pinched_torus.csv", "\n".join(rows) + "\n")
    return EXIT_OK


# --- validate ------------------------------------------------------------------


def cmd_validate(args) -> int:
    report = run_suite(args.suite)
    text = dumps_json(report)
    sys.stdout.write(text)
    if args.out:
        _write(args, f"validate_{args.suite}.json", text)
    return EXIT_OK if report["passed"] else EXIT_FAILED


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spheroidal", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out_flag(sp):
        sp.add_argument("--out", help="output directory (default: $SPHEROIDAL_OUT or .)")

    sp = sub.add_parser("spectrum", help="joint spectrum CSV and scatter SVG")
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--mmax", type=int, default=20)
    sp.add_argument("--lmax", type=int, default=40)
    sp.add_argument("--hbar", type=float, default=1.0, help="display scaling (hbar m, hbar^2 g)")
    sp.add_argument("--no-svg", action="store_true")
    out_flag(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("monodromy", help="unit-cell transport around the origin")
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--symmetry", choices=SYMMETRY_CHOICES, default="all")
    sp.add_argument("--lstar", type=int, default=None, help="override l* (default ceil(sqrt(3/2) gamma))")
    sp.add_argument("--no-svg", action="store_true")
    out_flag(sp)
    sp.set_defaults(func=cmd_monodromy)

    sp = sub.add_parser("classical", help="classical integrable system")
    sp.add_argument("what", choices=("bifurcation", "orbit", "action", "classify", "pinched"))
    sp.add_argument("--E", type=float, default=0.5)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--gamma", type=float, default=None, help="sets a from gamma^2 = 2 E a^2")
    sp.add_argument("--m", type=float, default=0.0)
    sp.add_argument("--g", type=float, default=0.0)
    sp.add_argument("--beta", type=float, default=None)
    sp.add_argument("--point", choices=("pole", "equator"), default="pole")
    sp.add_argument("--hamiltonian", choices=("G", "Lz"), default="G")
    sp.add_argument("--state", type=float, nargs=6, default=None, metavar=("PX", "PY", "PZ", "LX", "LY", "LZ"))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--t", type=float, default=10.0)
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--every", type=int, default=10, help="record every n-th step")
    sp.add_argument("--mrange", type=float, default=5.0)
    sp.add_argument("--samples", type=int, default=41)
    out_flag(sp)
    sp.set_defaults(func=cmd_classical)

    sp = sub.add_parser("validate", help="run numerical self-checks")
    sp.add_argument("--suite", choices=("oracle", "asymptotics", "brackets", "all"), default="all")
    out_flag(sp)
    sp.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except (SpectralConvergenceError, EigenNonConvergence, OracleResolutionError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except TransportError as exc:
        print(f"transport failure: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except cl.FlowDriftError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except RuntimeError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
