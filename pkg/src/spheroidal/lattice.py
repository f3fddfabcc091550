"""Joint spectrum (m, g_l^m) as a lattice, and unit-cell transport around its defect.

Cells are quadruples of (m, l) labels listed counterclockwise in the (m, g)
plane.  Transport moves a carrier point along a closed loop of anchors; at
each step the first corner is the spectrum point nearest the carrier in its
column and the other corners are predicted by translating the previous cell
and snapping to the nearest point.  The monodromy matrix compares the label
edges of the final cell with those of the initial one.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import boundary_parabolas
from .spectral import SpectralConfig, SpheroidalParams, spheroidal_eigenvalues, symmetry_class
from .textio import dumps_json, fmt

SELECTORS = ("all", "s2even", "s2odd", "even-even", "even-odd", "odd-even", "odd-odd")

# snaps further than this (in units of the local vertical spacing) are rejected
SNAP_REJECT = 0.5
# two candidates closer than this (same units) make a snap ambiguous
SNAP_AMBIGUITY = 0.1


class TransportError(RuntimeError):
    pass


class TransportAmbiguityError(TransportError):
    pass


class IncompleteLatticeError(TransportError):
    pass


@dataclass(frozen=True)
class SpectrumPoint:
    m: int
    l: int
    g: float

    @property
    def classes(self):
        return symmetry_class(self.l, self.m)


@dataclass
class JointSpectrum:
    gamma: float
    points: dict  # (m, l) -> g
    hbar: float = 1.0
    selector: str = "all"
    _columns: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        cols: dict[int, list] = {}
        for (m, l), g in self.points.items():
            cols.setdefault(m, []).append((l, g))
        self._columns = {m: sorted(v) for m, v in cols.items()}

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, label) -> bool:
        return tuple(label) in self.points

    def g(self, m: int, l: int) -> float:
        return self.points[(m, l)]

    def column(self, m: int):
        """(labels, values) of column m, ascending; empty arrays if absent."""
        col = self._columns.get(m, [])
        return np.array([c[0] for c in col], dtype=int), np.array([c[1] for c in col], dtype=float)

    @property
    def m_values(self):
        return sorted(self._columns)

    @property
    def column_period(self) -> int:
        return 2 if self.selector in ("even-even", "even-odd", "odd-even", "odd-odd") else 1

    def records(self):
        """SpectrumPoints sorted by (m, l)."""
        return [SpectrumPoint(m, l, g) for (m, l), g in sorted(self.points.items())]

    def scaled(self):
        """(hbar m, hbar^2 g) pairs in record order."""
        h = self.hbar
        return [(h * p.m, h * h * p.g) for p in self.records()]


def build_joint_spectrum(gamma: float, m_max: int, l_max: int, cfg: SpectralConfig | None = None,
                         hbar: float = 1.0) -> JointSpectrum:
    """All (m, l) with |m| <= m_max, |m| <= l <= l_max; negative m copied from |m|."""
    if not (l_max >= m_max >= 0):
        raise ValueError("need l_max >= m_max >= 0")
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    gamma2 = float(gamma) ** 2
    points = {}
    for m in range(m_max + 1):
        res = spheroidal_eigenvalues(SpheroidalParams(m, gamma2), l_max, cfg)
        g = np.array([r.g for r in res])
        if np.any(np.diff(g) <= 0):
            raise RuntimeError(f"column m={m} is not strictly increasing in l")
        if np.any(g < m * m - gamma2 - 1e-6):
            raise RuntimeError(f"column m={m} dips below the parabola m^2 - gamma^2")
        for r in res:
            points[(m, r.l)] = r.g
            if m:
                points[(-m, r.l)] = r.g
    return JointSpectrum(float(gamma), points, hbar=hbar)


def count_negative(spectrum: JointSpectrum, m: int = 0) -> int:
    """#{l : g_l^m < 0}.  Refuses a column that never becomes positive."""
    _, vals = spectrum.column(m)
    if vals.size == 0:
        raise ValueError(f"column m={m} is not in the spectrum")
    if vals[-1] < 0:
        raise ValueError(f"column m={m} is truncated before g changes sign")
    return int(np.sum(vals < 0))


def _selected(selector: str, l: int, m: int) -> bool:
    plm, pm, s2 = symmetry_class(l, m)
    if selector == "all":
        return True
    if selector == "s2even":
        return s2
    if selector == "s2odd":
        return not s2
    want_lm, want_m = selector.split("-")
    return plm == want_lm and pm == want_m


def filter_symmetry(spectrum: JointSpectrum, selector: str) -> JointSpectrum:
    """Sub-spectrum for one symmetry class.

    Selectors: 'all', 's2even', 's2odd', or '<parity of l-m>-<parity of m>'
    such as 'even-odd'.
    """
    if selector not in SELECTORS:
        raise ValueError(f"unknown selector {selector!r}; choose from {SELECTORS}")
    pts = {k: v for k, v in spectrum.points.items() if _selected(selector, k[1], k[0])}
    return JointSpectrum(spectrum.gamma, pts, hbar=spectrum.hbar, selector=selector)


# --- cells and transport ---------------------------------------------------


@dataclass(frozen=True)
class UnitCell:
    corners: tuple  # four (m, l) labels, counterclockwise
    kind: str = "generic"

    def __post_init__(self):
        if len(self.corners) != 4:
            raise ValueError("a unit cell has four corners")
        if self.kind not in ("B", "T", "generic"):
            raise ValueError("kind must be B, T or generic")

    @classmethod
    def B(cls, l: int, m: int, direction: int = 1) -> "UnitCell":
        """(g_l^m, g_{l+1}^{m+1}, g_{l+2}^{m+1}, g_{l+1}^m); direction=-1 mirrors in m."""
        d = direction
        return cls(((m, l), (m + d, l + 1), (m + d, l + 2), (m, l + 1)), "B")

    @classmethod
    def T(cls, l: int, m: int, direction: int = 1) -> "UnitCell":
        """(g_l^m, g_l^{m+1}, g_{l+1}^{m+1}, g_{l+1}^m); direction=-1 mirrors in m."""
        d = direction
        return cls(((m, l), (m + d, l), (m + d, l + 1), (m, l + 1)), "T")

    def edges(self) -> np.ndarray:
        """Rows v1 = c4 - c1 (vertical) and v2 = c2 - c1 (horizontal) in (dm, dl)."""
        c1, c2, _, c4 = (np.array(c) for c in self.corners)
        return np.array([c4 - c1, c2 - c1])

    def values(self, spectrum: JointSpectrum):
        return [spectrum.g(*c) for c in self.corners]


@dataclass
class MonodromyResult:
    matrix: np.ndarray
    index: int
    trace: list  # UnitCells, one per transport step
    # action on label differences: a row vector (dm, dl) maps to (dm, dl) @ label_map
    label_map: np.ndarray | None = None

    @property
    def is_unimodular(self) -> bool:
        return abs(round(float(np.linalg.det(self.matrix)))) == 1


def _local_spacing(vals: np.ndarray, g: float) -> float:
    """Gap between the column points that bracket g (edge gap outside the range)."""
    if vals.size < 2:
        raise IncompleteLatticeError("column has fewer than two points")
    i = int(np.clip(np.searchsorted(vals, g), 1, vals.size - 1))
    return float(vals[i] - vals[i - 1])


def _snap(spectrum: JointSpectrum, m: int, g: float):
    """Label in column m nearest to g, with the reject/ambiguity checks."""
    labels, vals = spectrum.column(m)
    if vals.size == 0:
        raise IncompleteLatticeError(f"column m={m} is missing")
    if g > vals[-1]:
        raise IncompleteLatticeError(f"column m={m} ends below g={g:.6g}")
    spacing = _local_spacing(vals, g)
    d = np.abs(vals - g) / spacing
    order = np.argsort(d, kind="stable")
    d1 = d[order[0]]
    if d1 > SNAP_REJECT:
        raise TransportAmbiguityError(
            f"no point within half a spacing of g={g:.6g} in column m={m} (distance {d1:.3f})"
        )
    if order.size > 1 and d[order[1]] - d1 < SNAP_AMBIGUITY:
        raise TransportAmbiguityError(f"two candidates near g={g:.6g} in column m={m}")
    return (m, int(labels[order[0]]))


def _nearest(spectrum: JointSpectrum, m: int, g: float):
    labels, vals = spectrum.column(m)
    if vals.size == 0:
        raise IncompleteLatticeError(f"column m={m} is missing")
    if g > vals[-1]:
        raise IncompleteLatticeError(f"carrier at g={g:.6g} is above the top of column m={m}")
    return (m, int(labels[np.argmin(np.abs(vals - g))]))


def _pos(spectrum: JointSpectrum, label):
    return np.array([label[0], spectrum.g(*label)], dtype=float)


def _step(spectrum: JointSpectrum, cell: UnitCell, carrier) -> UnitCell:
    m_new = int(round(carrier[0]))
    c1_old = _pos(spectrum, cell.corners[0])
    c1 = _nearest(spectrum, m_new, carrier[1])
    base = _pos(spectrum, c1)
    corners = [c1]
    for c in cell.corners[1:]:
        pred = base + (_pos(spectrum, c) - c1_old)
        corners.append(_snap(spectrum, int(round(pred[0])), pred[1]))
    return UnitCell(tuple(corners), cell.kind if corners == list(cell.corners) else "generic")


def _carrier_path(spectrum: JointSpectrum, anchors, offset):
    """Carrier positions between consecutive anchors.

    A change of m moves one column at a time; a vertical segment is split so
    no step exceeds a fifth of the local column spacing.
    """
    out = []
    for a, b in zip(anchors[:-1], anchors[1:]):
        a = np.asarray(a, dtype=float) + offset
        b = np.asarray(b, dtype=float) + offset
        if a[0] != b[0]:
            if abs(b[0] - a[0]) > spectrum.column_period + 1e-9:
                raise ValueError("anchors must move at most one column at a time")
            out.append(b)
            continue
        _, vals = spectrum.column(int(round(a[0])))
        if vals.size < 2:
            raise IncompleteLatticeError(f"column m={int(a[0])} is missing")
        g, target = a[1], b[1]
        while g != target:
            h = 0.2 * _local_spacing(vals, g)
            g = target if abs(target - g) <= h else g + math.copysign(h, target - g)
            out.append(np.array([a[0], g]))
    return out


def _walk(spectrum: JointSpectrum, anchors, initial: UnitCell):
    for c in initial.corners:
        if c not in spectrum:
            raise IncompleteLatticeError(f"initial cell corner {c} is not in the spectrum")
    anchors = [tuple(map(float, a)) for a in anchors]
    if anchors[0][0] != initial.corners[0][0]:
        raise ValueError("the loop must start in the column of the initial cell")
    offset = _pos(spectrum, initial.corners[0]) - np.array(anchors[0])
    cell = initial
    trace = [cell]
    for carrier in _carrier_path(spectrum, anchors, offset):
        cell = _step(spectrum, cell, carrier)
        trace.append(cell)
    return cell, trace


def _integer_matrix(final: UnitCell, initial: UnitCell) -> np.ndarray:
    V, W = initial.edges().astype(float), final.edges().astype(float)
    M = W @ np.linalg.inv(V)
    Mi = np.rint(M).astype(int)
    if np.max(np.abs(M - Mi)) > 1e-9 or abs(round(np.linalg.det(Mi))) != 1:
        raise TransportError(f"transport matrix {M.tolist()} is not unimodular")
    return Mi


def transport_cell(spectrum: JointSpectrum, loop, initial: UnitCell) -> MonodromyResult:
    """Carry `initial` around the closed `loop` of (m, g) anchors.

    The matrix M satisfies W = M V, where V and W hold the initial and final
    edges (v1 vertical, v2 horizontal) as rows in (dm, dl) label units.
    """
    if len(loop) < 3:
        raise ValueError("loop needs at least three anchors")
    if tuple(map(float, loop[0])) != tuple(map(float, loop[-1])):
        raise ValueError("loop is not closed")
    final, trace = _walk(spectrum, loop, initial)
    M = _integer_matrix(final, initial)
    V = initial.edges()
    A = np.rint(np.linalg.inv(V) @ M @ V).astype(int)
    return MonodromyResult(M, int(M[1, 0]), trace, A)


def l_star_for(gamma: float) -> int:
    """Smallest integer l* with gamma <= sqrt(2/3) l*."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return math.ceil(math.sqrt(1.5) * gamma - 1e-12)


def monodromy_loop(gamma: float, l_star: int, period: int = 1):
    """Counterclockwise anchors around the origin, starting and ending at m = 0.

    Lower parabola out to m = M, up the junction, along the upper parabola to
    -M, down the mirror junction and back along the lower parabola.  M is the
    largest multiple of `period` not exceeding l* - 1.
    """
    lower, upper = boundary_parabolas(gamma, l_star)
    M = (l_star - 1) // period * period
    if M < period:
        raise ValueError("l_star too small for a loop")
    ms = list(range(0, M + 1, period))
    loop = [(m, lower(m)) for m in ms]
    loop += [(m, upper(m)) for m in range(M, -M - 1, -period)]
    loop += [(m, lower(m)) for m in range(-M, 1, period)]
    return [(float(m), float(g)) for m, g in loop]


def initial_cell(spectrum: JointSpectrum, m: int = 0, direction: int = 1) -> UnitCell:
    """Cell on the lowest point of column m, its upper neighbour, and the next column.

    c2 is the lowest point of column m + direction*period with g no lower than
    g(c1) minus a quarter spacing; c3 is the point above c2.
    """
    period = spectrum.column_period
    labels, vals = spectrum.column(m)
    if vals.size < 2:
        raise IncompleteLatticeError(f"column m={m} needs two points")
    c1, c4 = (m, int(labels[0])), (m, int(labels[1]))
    m2 = m + direction * period
    labels2, vals2 = spectrum.column(m2)
    ok = np.nonzero(vals2 >= vals[0] - 0.25 * (vals[1] - vals[0]))[0]
    if ok.size == 0 or ok[0] + 1 >= vals2.size:
        raise IncompleteLatticeError(f"column m={m2} cannot complete the initial cell")
    c2, c3 = (m2, int(labels2[ok[0]])), (m2, int(labels2[ok[0] + 1]))
    return UnitCell((c1, c2, c3, c4))


def monodromy(spectrum: JointSpectrum, l_star: int | None = None, reverse: bool = False) -> MonodromyResult:
    """Transport the lowest cell at m = 0 around the standard loop.

    The reversed (clockwise) loop carries the mirrored cell, so that it is the
    mirror image of the forward run; a cell reaching past the junction column
    on the way down would find no partner there.  Compare label_map between
    the two directions, since the cell bases differ.
    """
    if spectrum.gamma <= 0:
        raise ValueError("no defect to encircle at gamma = 0")
    l_star = l_star or l_star_for(spectrum.gamma)
    loop = monodromy_loop(spectrum.gamma, l_star, spectrum.column_period)
    direction = 1
    if reverse:
        loop, direction = loop[::-1], -1
    return transport_cell(spectrum, loop, initial_cell(spectrum, 0, direction))


@dataclass(frozen=True)
class JunctionReport:
    direction: int
    b_cell: UnitCell
    t_cell: UnitCell
    middle_match: bool  # corners 2 and 3 agree
    end_match: bool  # last corner of B is the first of T
    max_value_mismatch: float  # in units of the local spacing
    shift: int  # l(T.c1) - l(B.c1)

    @property
    def ok(self) -> bool:
        return self.middle_match and self.end_match and self.shift == 1


def junction_compare(spectrum: JointSpectrum, l_star: int | None = None, direction: int = 1) -> JunctionReport:
    """Meet the bottom and top half-paths at m = direction*(l* - 1).

    B_0^0 is carried along the lower parabola and T_{l*}^0 along the upper
    one.  On arrival B should be B_{l*-1}^{l*-1} and T should be T_{l*}^{l*-1}
    (mirrored for direction=-1): corners 2 and 3 coincide and the last corner
    of B is the first of T, so labels along the two routes differ by one.
    """
    if spectrum.gamma <= 0:
        raise ValueError("lattice is degenerate at gamma = 0; cells are not defined")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    l_star = l_star or l_star_for(spectrum.gamma)
    lower, upper = boundary_parabolas(spectrum.gamma, l_star)
    end = direction * (l_star - 1)
    ms = range(0, end + direction, direction)
    b0 = UnitCell.B(0, 0, direction)
    t0 = UnitCell.T(l_star, 0, direction)
    b, _ = _walk(spectrum, [(m, lower(m)) for m in ms], b0)
    t, _ = _walk(spectrum, [(m, upper(m)) for m in ms], t0)
    middle = b.corners[1:3] == t.corners[1:3]
    endm = b.corners[3] == t.corners[0]
    mismatch = 0.0
    for cb, ct in ((b.corners[1], t.corners[1]), (b.corners[2], t.corners[2]), (b.corners[3], t.corners[0])):
        _, vals = spectrum.column(cb[0])
        gb, gt = spectrum.g(*cb), spectrum.g(*ct)
        mismatch = max(mismatch, abs(gb - gt) / _local_spacing(vals, gb))
    shift = t.corners[0][1] - b.corners[0][1]
    return JunctionReport(direction, b, t, middle, endm, mismatch, shift)


# --- export ------------------------------------------------------------------


def spectrum_csv(spectrum: JointSpectrum) -> str:
    """CSV text, one row per point sorted by (m, l).

    With hbar != 1 two extra columns carry the scaled pair (hbar m, hbar^2 g).
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["gamma", "m", "l", "g", "parity_lm", "parity_m", "s2"]
    scaled = spectrum.hbar != 1.0
    if scaled:
        header += ["hbar_m", "hbar2_g"]
    w.writerow(header)
    for p, (hm, hg) in zip(spectrum.records(), spectrum.scaled()):
        plm, pm, s2 = p.classes
        row = [fmt(spectrum.gamma), p.m, p.l, fmt(p.g), plm, pm, "even" if s2 else "odd"]
        if scaled:
            row += [fmt(hm), fmt(hg)]
        w.writerow(row)
    return buf.getvalue()


def read_spectrum_csv(text: str) -> JointSpectrum:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise ValueError("empty spectrum CSV")
    pts = {(int(r["m"]), int(r["l"])): float(r["g"]) for r in rows}
    return JointSpectrum(float(rows[0]["gamma"]), pts)


def monodromy_report(gamma: float, l_star: int, result: MonodromyResult, loop) -> str:
    doc = {
        "gamma": float(gamma),
        "l_star": l_star,
        "matrix": result.matrix.tolist(),
        "index": result.index,
        "loop_anchors": [[float(m), float(g)] for m, g in loop],
    }
    return dumps_json(doc)
