"""The classical spheroidal harmonics system on the co-adjoint orbit of e*(3).

Coordinates z = (P, L) in R^6 with Lie-Poisson tensor

    B(z) = -[[0, hat P], [hat P, hat L]],   hat(v) w = v x w,

Casimirs C1 = P.P = 2E and C2 = P.L = 0, and integrals

    L_z = l_z,   G = |L|^2 - a^2 (p_x^2 + p_y^2),   gamma^2 = 2 E a^2.

Dividing out the S^1 action of L_z gives invariants (b1, b2, b3) on the
reduced space P_m, cut out by the syzygy C3 = 0, and a one-degree-of-freedom
chart (q, p) in which G = (1 - q^2)(p^2 - gamma^2) + m^2/(1 - q^2).
"""

from __future__ import annotations

import cmath
import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.optimize import brentq

# --- parameters and states ---------------------------------------------------


@dataclass(frozen=True)
class SystemParams:
    E: float = 0.5
    a: float = 1.0

    def __post_init__(self):
        if not self.E > 0:
            raise ValueError("E must be positive")
        if self.a < 0:
            raise ValueError("a must be non-negative")

    @property
    def gamma2(self) -> float:
        return 2.0 * self.E * self.a * self.a

    @property
    def gamma(self) -> float:
        return math.sqrt(self.gamma2)

    @property
    def radius(self) -> float:
        """|P| on the orbit, sqrt(2E)."""
        return math.sqrt(2.0 * self.E)

    @classmethod
    def from_gamma(cls, gamma: float, E: float = 0.5) -> "SystemParams":
        return cls(E, gamma / math.sqrt(2.0 * E))


@dataclass(frozen=True)
class EuclideanState:
    P: np.ndarray
    L: np.ndarray

    @classmethod
    def from_vector(cls, z) -> "EuclideanState":
        z = np.asarray(z)
        return cls(z[:3].copy(), z[3:6].copy())

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.P, self.L])


@dataclass(frozen=True)
class ReducedState:
    b1: float
    b2: float
    b3: float
    m: float


@dataclass(frozen=True)
class ChartState:
    q: float
    p: float


@dataclass(frozen=True)
class NeumannState:
    x: np.ndarray
    y: np.ndarray


class CriticalKind(enum.Enum):
    FOCUS_FOCUS = "FocusFocus"
    ELLIPTIC_TRANSVERSAL = "EllipticTransversal"
    REGULAR = "Regular"
    OTHER = "Other"


@dataclass(frozen=True)
class CriticalClassification:
    kind: CriticalKind
    eigenvalues: tuple  # all six, sorted; empty for a regular point
    beta: float | None
    residual: float


def random_state(rng: np.random.Generator, params: SystemParams, scale: float = 1.0) -> EuclideanState:
    """A random point on the orbit C1 = 2E, C2 = 0."""
    P = rng.normal(size=3)
    P *= params.radius / np.linalg.norm(P)
    L = rng.normal(size=3) * scale
    L -= P * (P @ L) / (P @ P)
    return EuclideanState(P, L)


# --- Poisson structure and vector fields ------------------------------------


def hat(v) -> np.ndarray:
    return np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])


def poisson_tensor(z) -> np.ndarray:
    z = np.asarray(z)
    P, L = z[:3], z[3:6]
    Z = np.zeros((3, 3), dtype=z.dtype)
    return -np.block([[Z, hat(P)], [hat(P), hat(L)]])


def G_value(z, params: SystemParams):
    z = np.asarray(z)
    return z[..., 3] ** 2 + z[..., 4] ** 2 + z[..., 5] ** 2 - params.a**2 * (z[..., 0] ** 2 + z[..., 1] ** 2)


def Lz_value(z):
    return np.asarray(z)[..., 5]


def casimirs(state: EuclideanState):
    """(C1, C2) = (P.P, P.L)."""
    return float(state.P @ state.P), float(state.P @ state.L)


def _field(z, hamiltonian: str, a2: float) -> np.ndarray:
    """B grad H for H in {G, Lz}; z may carry leading batch axes."""
    P, L = z[..., :3], z[..., 3:6]
    ez = np.zeros_like(P)
    ez[..., 2] = 1.0
    if hamiltonian == "G":
        dP = -2.0 * np.cross(P, L)
        dL = -2.0 * a2 * P[..., 2:3] * np.cross(P, ez)
    elif hamiltonian == "Lz":
        dP = -np.cross(P, ez)
        dL = -np.cross(L, ez)
    else:
        raise ValueError("hamiltonian must be 'G' or 'Lz'")
    return np.concatenate([dP, dL], axis=-1)


def _scalar_field(hamiltonian: str, a2: float):
    """Same field as _field on a list of six floats; numpy overhead dominates RK4 otherwise."""
    if hamiltonian == "G":

        def f(z):
            px, py, pz, lx, ly, lz = z
            c = -2.0 * a2 * pz
            return [
                -2.0 * (py * lz - pz * ly),
                -2.0 * (pz * lx - px * lz),
                -2.0 * (px * ly - py * lx),
                c * py,
                -c * px,
                0.0,
            ]

    elif hamiltonian == "Lz":

        def f(z):
            px, py, pz, lx, ly, lz = z
            return [-py, px, 0.0, -ly, lx, 0.0]

    else:
        raise ValueError("hamiltonian must be 'G' or 'Lz'")
    return f


def e3_vector_field(state: EuclideanState, hamiltonian: str, params: SystemParams) -> EuclideanState:
    """Tangent vector B grad H at `state` for H = G or H = L_z.

    G:   dP = -2 P x L,   dL = -2 a^2 p_z P x e_z
    L_z: dP = -P x e_z,   dL = -L x e_z
    """
    return EuclideanState.from_vector(_field(state.vector, hamiltonian, params.a**2))


def complex_step_grad(f, z, h: float = 1e-30) -> np.ndarray:
    """Gradient of a real-analytic scalar function by the complex-step method."""
    z = np.asarray(z, dtype=float)
    g = np.empty(z.size)
    for i in range(z.size):
        zc = z.astype(complex)
        zc[i] += 1j * h
        g[i] = np.imag(f(zc)) / h
    return g


def poisson_bracket(f, h, z) -> float:
    """{f, h}(z) = grad f . B grad h with complex-step gradients."""
    z = np.asarray(z, dtype=float)
    return float(complex_step_grad(f, z) @ poisson_tensor(z) @ complex_step_grad(h, z))


# --- integration ---------------------------------------------------------------


class FlowDriftError(RuntimeError):
    pass


@dataclass
class Trajectory:
    t: np.ndarray
    z: np.ndarray  # (n, 6)
    params: SystemParams

    def diagnostics(self):
        """Columns C1, C2, G, Lz along the trajectory."""
        P, L = self.z[:, :3], self.z[:, 3:]
        return (
            np.einsum("ij,ij->i", P, P),
            np.einsum("ij,ij->i", P, L),
            G_value(self.z, self.params),
            Lz_value(self.z),
        )

    def max_drift(self) -> float:
        return max(float(np.max(np.abs(c - c[0]))) for c in self.diagnostics())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "px", "py", "pz", "lx", "ly", "lz", "C1", "C2", "G", "Lz"])
        cols = self.diagnostics()
        for i, t in enumerate(self.t):
            row = [t, *self.z[i], *(c[i] for c in cols)]
            w.writerow([format(float(v), ".17g") for v in row])
        return buf.getvalue()


def integrate_flow(state: EuclideanState, hamiltonian: str, t_end: float, dt: float,
                   params: SystemParams, drift_bound: float = 1e-6, record_every: int = 1) -> Trajectory:
    """Fixed-step RK4 for the flow of G or L_z.

    Raises FlowDriftError as soon as any of C1, C2, G, L_z moves more than
    `drift_bound` from its initial value.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    a2 = params.a**2
    n = int(round(t_end / dt))
    z = state.vector.astype(float)

    def invariants(v):
        return np.array([v[:3] @ v[:3], v[:3] @ v[3:], G_value(v, params), v[5]])

    ref = invariants(z)
    ts, zs = [0.0], [z.copy()]
    f = _scalar_field(hamiltonian, a2)
    y = z.tolist()
    for k in range(1, n + 1):
        k1 = f(y)
        k2 = f([a + 0.5 * dt * b for a, b in zip(y, k1)])
        k3 = f([a + 0.5 * dt * b for a, b in zip(y, k2)])
        k4 = f([a + dt * b for a, b in zip(y, k3)])
        y = [a + (dt / 6.0) * (b1 + 2.0 * b2 + 2.0 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]
        if k % record_every == 0 or k == n:
            z = np.array(y)
            drift = np.max(np.abs(invariants(z) - ref))
            if drift > drift_bound:
                raise FlowDriftError(f"invariant drift {drift:.3g} exceeds {drift_bound:.3g} at t={k * dt:.6g}")
            ts.append(k * dt)
            zs.append(z)
    return Trajectory(np.array(ts), np.array(zs), params)


# --- singular reduction --------------------------------------------------------


def _b_functions(params: SystemParams):
    r = params.radius
    return (
        lambda z: z[2] / r,
        lambda z: z[3] ** 2 + z[4] ** 2,
        lambda z: (z[3] * z[1] - z[4] * z[0]) / r,
    )


def syzygy(b: ReducedState) -> float:
    """C3 = (1 - b1^2) b2 - b1^2 m^2 - b3^2."""
    return (1.0 - b.b1**2) * b.b2 - b.b1**2 * b.m**2 - b.b3**2


def syzygy_gradient(b: ReducedState) -> np.ndarray:
    """Gradient of C3 in (b1, b2, b3)."""
    return np.array([-2.0 * b.b1 * (b.b2 + b.m**2), 1.0 - b.b1**2, -2.0 * b.b3])


def check_on_orbit(state: EuclideanState, params: SystemParams, tol: float = 1e-9) -> None:
    c1, c2 = casimirs(state)
    scale = 2.0 * params.E
    if abs(c1 - scale) > tol * scale or abs(c2) > tol * math.sqrt(scale) * max(1.0, np.linalg.norm(state.L)):
        raise ValueError(f"state is off the orbit: C1 - 2E = {c1 - scale:.3g}, C2 = {c2:.3g}")


def reduce(state: EuclideanState, params: SystemParams, tol: float = 1e-9) -> ReducedState:
    """(b1, b2, b3) = (p_z/sqrt(2E), l_x^2 + l_y^2, (l_x p_y - l_y p_x)/sqrt(2E)), m = l_z."""
    check_on_orbit(state, params, tol)
    z = state.vector
    f1, f2, f3 = _b_functions(params)
    return ReducedState(float(f1(z)), float(f2(z)), float(f3(z)), float(z[5]))


def reduced_brackets_check(state: EuclideanState, params: SystemParams) -> dict:
    """Residuals of {b1,b2} = 2 b3, {b1,b3} = 1 - b1^2, {b2,b3} = 2 b1 m^2 + 2 b1 b2."""
    b = reduce(state, params)
    z = state.vector
    f1, f2, f3 = _b_functions(params)
    return {
        "b1b2": poisson_bracket(f1, f2, z) - 2.0 * b.b3,
        "b1b3": poisson_bracket(f1, f3, z) - (1.0 - b.b1**2),
        "b2b3": poisson_bracket(f2, f3, z) - (2.0 * b.b1 * b.m**2 + 2.0 * b.b1 * b.b2),
    }


def reconstruct(b: ReducedState, params: SystemParams, u: float = 0.0, tol: float = 1e-9) -> EuclideanState:
    """A point of the S^1 orbit over b, selected by the angle u of P.

    P = sqrt(2E) (s cos u, s sin u, b1) with s = sqrt(1 - b1^2),
    L = (sqrt(b2) cos v, sqrt(b2) sin v, m) with u - v = arg(-b1 m + i b3).
    """
    if abs(syzygy(b)) > tol * max(1.0, b.b2 + b.m**2):
        raise ValueError(f"b violates the syzygy (C3 = {syzygy(b):.3g})")
    if not -1.0 <= b.b1 <= 1.0 or b.b2 < 0:
        raise ValueError("need |b1| <= 1 and b2 >= 0")
    r = params.radius
    s = math.sqrt(max(0.0, 1.0 - b.b1**2))
    P = r * np.array([s * math.cos(u), s * math.sin(u), b.b1])
    w = complex(-b.b1 * b.m, b.b3)
    # at the singular points (b1 = +-1, b2 = 0, m = 0) L = 0 and v is irrelevant
    v = u - cmath.phase(w) if abs(w) > 0 else u
    rb = math.sqrt(b.b2)
    L = np.array([rb * math.cos(v), rb * math.sin(v), b.m])
    return EuclideanState(P, L)


def G_reduced(b: ReducedState, params: SystemParams) -> float:
    return b.b2 + b.m**2 - params.gamma2 * (1.0 - b.b1**2)


def chart(b: ReducedState) -> ChartState:
    """(q, p) = (b1, b3/(1 - b1^2)); canonical, {q, p} = 1."""
    if abs(b.b1) >= 1.0:
        raise ValueError("chart is singular at b1 = +-1")
    return ChartState(b.b1, b.b3 / (1.0 - b.b1**2))


def reduced_hamiltonian(q: float, p: float, m: float, params: SystemParams) -> float:
    """G(q, p) = (1 - q^2)(p^2 - gamma^2) + m^2/(1 - q^2), |q| < 1."""
    w = 1.0 - q * q
    if not w > 0:
        raise ValueError("reduced_hamiltonian needs |q| < 1")
    return w * (p * p - params.gamma2) + m * m / w


# --- critical values and level sets ------------------------------------------


@dataclass
class BifurcationData:
    parabola: np.ndarray  # rows (m, m^2 - gamma^2)
    isolated: tuple = (0.0, 0.0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "g", "kind"])
        for m, g in self.parabola:
            w.writerow([format(float(m), ".17g"), format(float(g), ".17g"), "elliptic-transversal"])
        w.writerow([format(self.isolated[0], ".17g"), format(self.isolated[1], ".17g"), "focus-focus"])
        return buf.getvalue()


def critical_values(params: SystemParams, m_range) -> BifurcationData:
    """Image of the critical set: the parabola g = m^2 - gamma^2 and the point (0, 0)."""
    m = np.asarray(m_range, dtype=float)
    return BifurcationData(np.column_stack([m, m * m - params.gamma2]))


def level_set_components(m: float, g: float, params: SystemParams, n: int = 401) -> int:
    """Number of connected components of {G = g} in the reduced space P_m.

    The level set is drawn in the (b1, b3) plane, where b2 is eliminated by the
    syzygy; multiplying by 1 - b1^2 gives the polynomial
    F = b3^2 + m^2 - (1 - b1^2)(g + gamma^2 (1 - b1^2)).  Grid cells where F
    changes sign are labelled with 8-connectivity.
    """
    g2 = params.gamma2
    b3max = 1.05 * math.sqrt(max(g + g2, 0.0) + 1e-12) + 1e-6
    b1 = np.linspace(-1.0, 1.0, n)
    b3 = np.linspace(-b3max, b3max, n)
    B1, B3 = np.meshgrid(b1, b3, indexing="ij")
    w = 1.0 - B1**2
    F = B3**2 + m * m - w * (g + g2 * w)
    # the factor 1 - b1^2 adds touching zeros at (+-1, 0) when m = 0; >= keeps them out
    s = F >= 0
    cross = (
        (s[:-1, :-1] != s[1:, :-1])
        | (s[:-1, :-1] != s[:-1, 1:])
        | (s[:-1, :-1] != s[1:, 1:])
        | (s[1:, :-1] != s[:-1, 1:])
    )
    _, count = ndimage.label(cross, structure=np.ones((3, 3), dtype=int))
    return int(count)


# --- critical points -----------------------------------------------------------


def _half_G_plus_beta_Lz(z, beta, a2):
    return 0.5 * _field(z, "G", a2) + beta * _field(z, "Lz", a2)


def fd_jacobian(f, z, rel_step: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian with step rel_step * max(1, |z|)."""
    z = np.asarray(z, dtype=float)
    h = rel_step * max(1.0, float(np.linalg.norm(z)))
    cols = []
    for i in range(z.size):
        e = np.zeros_like(z)
        e[i] = h
        cols.append((f(z + e) - f(z - e)) / (2.0 * h))
    return np.column_stack(cols)


def classify_critical_point(state: EuclideanState, params: SystemParams, beta: float | None = None,
                            tol: float = 1e-8) -> CriticalClassification:
    """Linearise X = B grad(G/2) + beta B grad L_z at a critical point.

    With the flow of G/2 the pole eigenvalues are +-a sqrt(2E) +- i beta and
    the equator ones 0, 0, +-i sqrt(m^2 + gamma^2); the flow of G itself
    doubles the G contribution.  beta is fixed by least squares whenever the
    L_z field is nonzero (the equator needs beta = -m in these conventions);
    at rank-0 points it is free and defaults to 1.  A point whose fields are
    not parallel is reported as Regular with no eigenvalues.
    """
    z = state.vector.astype(float)
    a2 = params.a**2
    xg = 0.5 * _field(z, "G", a2)
    xl = _field(z, "Lz", a2)
    scale = max(1.0, float(np.linalg.norm(z))) ** 2
    nl = float(xl @ xl)
    if nl > 0:
        beta_star = -float(xg @ xl) / nl
        residual = float(np.linalg.norm(xg + beta_star * xl)) / scale
        beta_used = beta_star
    else:
        residual = float(np.linalg.norm(xg)) / scale
        beta_used = 1.0 if beta is None else float(beta)
    if residual > tol:
        return CriticalClassification(CriticalKind.REGULAR, (), None, residual)

    J = fd_jacobian(lambda v: _half_G_plus_beta_Lz(v, beta_used, a2), z)
    ev = np.linalg.eigvals(J)
    ev = ev[np.lexsort((ev.imag, ev.real))]
    eps = 1e-6 * scale
    nonzero = ev[np.abs(ev) > eps]
    if nonzero.size == 4 and np.all(np.abs(nonzero.real) > eps) and np.all(np.abs(nonzero.imag) > eps):
        kind = CriticalKind.FOCUS_FOCUS
    elif nonzero.size == 2 and np.all(np.abs(nonzero.real) <= eps):
        kind = CriticalKind.ELLIPTIC_TRANSVERSAL
    else:
        kind = CriticalKind.OTHER
    return CriticalClassification(kind, tuple(complex(x) for x in ev), beta_used, residual)


def pole_state(params: SystemParams, north: bool = True) -> EuclideanState:
    s = 1.0 if north else -1.0
    return EuclideanState(np.array([0.0, 0.0, s * params.radius]), np.zeros(3))


def equator_state(params: SystemParams, m: float, phi: float = 0.0) -> EuclideanState:
    r = params.radius
    return EuclideanState(np.array([r * math.cos(phi), r * math.sin(phi), 0.0]), np.array([0.0, 0.0, m]))


# --- singular fibre ------------------------------------------------------------


def pinched_torus(pz, phi, sign: int, params: SystemParams) -> EuclideanState:
    """Point of the doubly pinched torus G = 0, L_z = 0.

    (p_x, p_y, l_x, l_y) = sqrt(2E - p_z^2) (cos phi, sin phi, +-a sin phi, -+a cos phi).
    Accepts arrays for p_z and phi (broadcast); the state then holds arrays.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    pz = np.asarray(pz, dtype=float)
    phi = np.asarray(phi, dtype=float)
    two_e = 2.0 * params.E
    if np.any(np.abs(pz) > math.sqrt(two_e) * (1 + 1e-15)):
        raise ValueError("need |p_z| <= sqrt(2E)")
    pz, phi = np.broadcast_arrays(pz, phi)
    r = np.sqrt(np.maximum(two_e - pz * pz, 0.0))
    a = params.a
    P = np.stack([r * np.cos(phi), r * np.sin(phi), pz])
    L = np.stack([sign * a * r * np.sin(phi), -sign * a * r * np.cos(phi), np.zeros_like(pz)])
    return EuclideanState(P, L)


def heteroclinic_q(t, sign: int, c: float, params: SystemParams):
    """q(t) = tanh(+-2 gamma t - c), the m = 0 connection between the poles."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return np.tanh(sign * 2.0 * params.gamma * np.asarray(t, dtype=float) - c)


def heteroclinic_residual(t, sign: int, c: float, params: SystemParams):
    """q' - dG/dp along the orbit, with p = +-gamma and dG/dp = 2 p (1 - q^2)."""
    gam = params.gamma
    t = np.asarray(t, dtype=float)
    arg = sign * 2.0 * gam * t - c
    qdot = sign * 2.0 * gam / np.cosh(arg) ** 2
    q = heteroclinic_q(t, sign, c, params)
    return qdot - 2.0 * sign * gam * (1.0 - q * q)


# --- actions -------------------------------------------------------------------


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10, max_depth: int = 50) -> float:
    """Adaptive Simpson quadrature with Richardson correction, explicit stack."""
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) * (fa + 4 * fm + fb) / 6.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = 0.0
    while stack:
        a0, b0, fa0, fm0, fb0, s, eps, depth = stack.pop()
        m = 0.5 * (a0 + b0)
        lm, rm = 0.5 * (a0 + m), 0.5 * (m + b0)
        flm, frm = f(lm), f(rm)
        left = (m - a0) * (fa0 + 4 * flm + fm0) / 6.0
        right = (b0 - m) * (fm0 + 4 * frm + fb0) / 6.0
        delta = left + right - s
        if depth >= max_depth or abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
        else:
            stack.append((a0, m, fa0, flm, fm0, left, 0.5 * eps, depth + 1))
            stack.append((m, b0, fm0, frm, fb0, right, 0.5 * eps, depth + 1))
    return total


def _turning_w(m: float, g: float, gamma2: float) -> float:
    """Smallest w = 1 - q^2 in [0, 1] with gamma^2 w^2 + g w - m^2 >= 0 beyond it."""
    if m == 0:
        if g >= 0:
            return 0.0
        return -g / gamma2
    f = lambda w: gamma2 * w * w + g * w - m * m  # noqa: E731
    return brentq(f, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def action_I(m: float, g: float, params: SystemParams, tol: float = 1e-10) -> float:
    """I = (1/2 pi) oint p dq on the level (m, g) of the reduced system.

    p^2 = gamma^2 + (g - m^2/(1 - q^2))/(1 - q^2); the oval spans
    q_- <= q <= q_+ with q_+- = +-sqrt(1 - w0), w0 the turning value of
    w = 1 - q^2.  The substitution q = q_- + (q_+ - q_-) sin^2 s removes the
    square-root endpoint behaviour before adaptive Simpson.
    """
    gamma2 = params.gamma2
    lower = m * m - gamma2
    if g < lower:
        raise ValueError(f"(m, g) = ({m}, {g}) lies below the parabola g = m^2 - gamma^2")
    if g == lower:
        return 0.0
    if m == 0 and g == 0 and gamma2 == 0:
        return 0.0
    if m != 0 and gamma2 * 1.0 + g - m * m <= 0:
        raise ValueError("no turning point bracketed in (0, 1]")
    w0 = _turning_w(m, g, gamma2)
    qp = math.sqrt(max(0.0, 1.0 - w0))
    qm = -qp
    width = qp - qm

    if w0 == 0.0:
        # m = 0, g >= 0: the oval reaches q = +-1, where w = 4 sin^2 s cos^2 s and
        # p dq/ds = 2 sqrt(gamma^2 w + g) stays finite
        def integrand(s):
            w = (2.0 * math.sin(s) * math.cos(s)) ** 2
            return 2.0 * math.sqrt(gamma2 * w + g)

    else:

        def integrand(s):
            sn, cs = math.sin(s), math.cos(s)
            q = qm + width * sn * sn
            w = (1.0 - q) * (1.0 + q)
            p2 = gamma2 + (g - m * m / w) / w
            return math.sqrt(max(p2, 0.0)) * 2.0 * width * sn * cs

    val = adaptive_simpson(integrand, 0.0, 0.5 * math.pi, tol)
    # the closed curve covers [q_-, q_+] twice, with p > 0 and p < 0
    return 2.0 * val / (2.0 * math.pi)


# --- Neumann system ------------------------------------------------------------


def neumann_map(state: EuclideanState, params: SystemParams) -> NeumannState:
    """(x, y) = (P, P x L / |P|^2) scaled to the unit sphere: x~ = x/c, y~ = c y, c = sqrt(2E)."""
    P, L = np.asarray(state.P), np.asarray(state.L)
    n2 = P @ P
    if n2 == 0:
        raise ValueError("P = 0 has no image on the sphere")
    c = params.radius
    return NeumannState(P / c, c * np.cross(P, L) / n2)


def neumann_unscaled(z):
    """(P, P x L/|P|^2) as a 6-vector; complex-step friendly."""
    z = np.asarray(z)
    P, L = z[:3], z[3:6]
    return np.concatenate([P, np.cross(P, L) / (P @ P)])


def neumann_G(ns: NeumannState, params: SystemParams) -> float:
    """G_N = |y|^2/2 - E a^2 (x1^2 + x2^2); equals G/2 on the image."""
    x, y = ns.x, ns.y
    return 0.5 * float(y @ y) - params.E * params.a**2 * float(x[0] ** 2 + x[1] ** 2)


def neumann_L(ns: NeumannState) -> float:
    """L_N = -x1 y2 + x2 y1; equals l_z on the image."""
    x, y = ns.x, ns.y
    return float(-x[0] * y[1] + x[1] * y[0])


def dirac_tensor(x, y) -> np.ndarray:
    """Dirac structure of T*S^2 in R^6."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x @ x
    proj = np.eye(3) - np.outer(x, x) / r2
    return np.block([[np.zeros((3, 3)), -proj], [proj, -hat(np.cross(x, y)) / r2]])


def pushforward_bracket(z, params: SystemParams | None = None, scaled: bool = True) -> np.ndarray:
    """J B J^T at z, J the Jacobian of the map to (x, y) by complex step.

    With `scaled` the unit-sphere coordinates of neumann_map are used.
    """
    z = np.asarray(z, dtype=float)
    c = params.radius if (scaled and params is not None) else 1.0

    def comp(i):
        def f(v):
            out = neumann_unscaled(v)
            return out[i] / c if i < 3 else out[i] * c

        return f

    J = np.array([complex_step_grad(comp(i), z) for i in range(6)])
    return J @ poisson_tensor(z) @ J.T


# --- discrete symmetries -------------------------------------------------------

_SIGNS = {"S1": (1, 1, -1), "S2": (-1, -1, -1), "S3": (-1, -1, 1), "id": (1, 1, 1)}


def symmetry_matrices(which: str):
    """(S, S~) with S~ = diag(s2 s3, s1 s3, s1 s2), the map Q x P inherits from Q, P -> SQ, SP."""
    if which not in _SIGNS:
        raise ValueError(f"unknown symmetry {which!r}")
    s1, s2, s3 = _SIGNS[which]
    return np.diag([s1, s2, s3]).astype(float), np.diag([s2 * s3, s1 * s3, s1 * s2]).astype(float)


def apply_discrete_symmetry(which: str, state: EuclideanState) -> EuclideanState:
    S, St = symmetry_matrices(which)
    return EuclideanState(S @ np.asarray(state.P), St @ np.asarray(state.L))
