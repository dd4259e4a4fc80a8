"""The pi/3 fixed-point recursion and its damped information geometry.

The recursion U_{k+1} = U_k R_s U_k^dag R_t U_k with selective pi/3 phase
shifts on the source and target states drives the failure probability to
eps^(3^k), monotonically.  The operator word grows as 3^k, so U_k is never
materialized as a matrix: its action on a state is computed recursively, and
a parallel coefficient track c_{k+1} = e^{i pi/3}(e^{i pi/3} + eps_k) c_k,
eps_{k+1} = eps_k^3 cross-checks the simulation at every depth.

The damped two-component family p_1 = xi(theta) exp(-theta) gives a Fisher
information that decays instead of staying constant, and the geodesic
equation with exponentially decaying Lagrangian becomes
q'' + gamma q' + (L0/2) exp(-gamma theta) q = 0, solved in closed form by
first-order Bessel functions of a shrinking argument.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bessel
from .info_geom import GeodesicSolution, ParametricFamily, _central_diff, _rk4

OMEGA = cmath.exp(1j * math.pi / 3.0)
MAX_DEPTH = 5
TOL_TRACKS = 1e-10


def selective_phase(state: np.ndarray, anchor_state: np.ndarray, phi: float) -> np.ndarray:
    """Apply R = I - (1 - e^{i phi}) |a><a| to a state; phi = pi recovers the
    plain reflection I - 2|a><a|."""
    state = np.asarray(state, dtype=np.complex128)
    anchor = np.asarray(anchor_state, dtype=np.complex128)
    if anchor.shape != state.shape:
        raise ValueError("anchor and state dimensions differ")
    nrm = np.linalg.norm(anchor)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError("anchor state must be normalized")
    overlap = np.vdot(anchor, state)
    return state - (1.0 - cmath.exp(1j * phi)) * overlap * anchor


@dataclass(frozen=True)
class RecursionState:
    """One depth of the recursion: overlap, failure probability, and the
    exactly simulated state."""

    k: int
    c_k: complex
    eps_k: float
    state: np.ndarray


def _check_unitary(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    n = u.shape[0]
    if u.shape != (n, n):
        raise ValueError("U0 must be square")
    if np.max(np.abs(u.conj().T @ u - np.eye(n))) > 1e-10:
        raise ValueError("U0 must be unitary")
    return u


def _basis_state(n: int, index: int) -> np.ndarray:
    if not 0 <= index < n:
        raise ValueError(f"index {index} out of range for N={n}")
    v = np.zeros(n, dtype=np.complex128)
    v[index] = 1.0
    return v


def _apply_uk(k: int, v: np.ndarray, u0: np.ndarray, src: np.ndarray, tgt: np.ndarray) -> np.ndarray:
    if k == 0:
        return u0 @ v
    w = _apply_uk(k - 1, v, u0, src, tgt)
    w = selective_phase(w, tgt, math.pi / 3.0)
    w = _apply_uk_dag(k - 1, w, u0, src, tgt)
    w = selective_phase(w, src, math.pi / 3.0)
    return _apply_uk(k - 1, w, u0, src, tgt)


def _apply_uk_dag(k: int, v: np.ndarray, u0: np.ndarray, src: np.ndarray, tgt: np.ndarray) -> np.ndarray:
    if k == 0:
        return u0.conj().T @ v
    w = _apply_uk_dag(k - 1, v, u0, src, tgt)
    w = selective_phase(w, src, -math.pi / 3.0)
    w = _apply_uk(k - 1, w, u0, src, tgt)
    w = selective_phase(w, tgt, -math.pi / 3.0)
    return _apply_uk_dag(k - 1, w, u0, src, tgt)


def closed_form_failure(eps: float, k: int) -> float:
    """Failure probability eps^(3^k) after k recursive steps."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError("failure probability must lie in [0, 1]")
    return eps ** (3**k)


def coefficient_track(c0: complex, depth: int) -> list[tuple[complex, float]]:
    """Overlap recursion c_{k+1} = omega (omega + eps_k) c_k with
    eps_{k+1} = eps_k^3, starting from the depth-zero overlap."""
    out = [(complex(c0), 1.0 - abs(c0) ** 2)]
    for _ in range(depth):
        c, eps = out[-1]
        out.append((OMEGA * (OMEGA + eps) * c, eps**3))
    return out


def fixed_point_run(
    u0: np.ndarray,
    target: int,
    depth: int,
    source: int | np.ndarray = 0,
) -> list[RecursionState]:
    """Run the recursion to the given depth, returning both tracks per depth.

    The source defaults to the all-zeros register state; any basis index or
    explicit normalized state vector may be supplied instead.  The simulated
    and coefficient tracks must agree to TOL_TRACKS at every depth.
    """
    if depth < 0 or depth > MAX_DEPTH:
        raise ValueError(f"depth must be between 0 and {MAX_DEPTH} (operator word grows as 3^k)")
    u0 = _check_unitary(u0)
    n = u0.shape[0]
    tgt = _basis_state(n, target)
    if isinstance(source, (int, np.integer)):
        src = _basis_state(n, int(source))
    else:
        src = np.asarray(source, dtype=np.complex128)
        if src.shape != (n,) or abs(np.linalg.norm(src) - 1.0) > 1e-10:
            raise ValueError("source must be a normalized length-N state")
    states = []
    for k in range(depth + 1):
        psi = _apply_uk(k, src, u0, src, tgt)
        c = complex(np.vdot(tgt, psi))
        # the failure probability is summed over the non-target amplitudes:
        # 1 - |c|^2 loses all relative precision once eps^(3^k) is tiny
        residual = psi - c * tgt
        eps = float(np.real(np.vdot(residual, residual)))
        states.append(RecursionState(k=k, c_k=c, eps_k=eps, state=psi))
    track = coefficient_track(states[0].c_k, depth)
    for rec, (c_rec, eps_rec) in zip(states, track):
        if abs(rec.c_k - c_rec) > TOL_TRACKS or abs(rec.eps_k - eps_rec) > TOL_TRACKS:
            raise RuntimeError(
                f"simulation and coefficient tracks disagree at depth {rec.k}"
            )
    return states


def coefficient_identity_check(eps: float, tol: float = 1e-14) -> bool:
    """Verify |omega + eps|^2 = 1 + eps + eps^2 and
    |omega (omega + eps)|^2 (1 - eps) = 1 - eps^3."""
    lhs1 = abs(OMEGA + eps) ** 2
    rhs1 = 1.0 + eps + eps * eps
    lhs2 = abs(OMEGA * (OMEGA + eps)) ** 2 * (1.0 - eps)
    rhs2 = 1.0 - eps**3
    return abs(lhs1 - rhs1) <= tol and abs(lhs2 - rhs2) <= tol


# -- damped family -----------------------------------------------------------


@dataclass(frozen=True)
class DampedFamily:
    """Two-component family p_0 = 1 - xi e^{-theta}, p_1 = xi e^{-theta} with
    differentiable xi taking values in (0, 1]."""

    xi: Callable[[float], float]
    dxi: Callable[[float], float] | None = None

    def xi_at(self, theta: float) -> float:
        x = float(self.xi(theta))
        if not 0.0 < x <= 1.0:
            raise ValueError(f"xi({theta}) = {x} outside (0, 1]")
        return x

    def dxi_at(self, theta: float) -> float:
        if self.dxi is not None:
            return float(self.dxi(theta))
        return float(_central_diff(lambda t: np.array([self.xi(t)]), theta)[0])

    def probabilities(self, theta: float) -> np.ndarray:
        p1 = self.xi_at(theta) * math.exp(-theta)
        if not 0.0 < p1 < 1.0:
            raise ValueError("p_1 must lie strictly inside (0, 1)")
        return np.array([1.0 - p1, p1])

    def as_parametric_family(self, domain=(0.0, 40.0)) -> ParametricFamily:
        return ParametricFamily(n=2, p=self.probabilities, domain=domain)


def damped_fisher(xi, theta: float, dxi=None) -> float:
    """Fisher information [(xi' - xi)^2 / (xi (1 - xi e^{-theta}))] e^{-theta}."""
    fam = xi if isinstance(xi, DampedFamily) else DampedFamily(xi=xi, dxi=dxi)
    x = fam.xi_at(theta)
    dx = fam.dxi_at(theta)
    p0 = 1.0 - x * math.exp(-theta)
    if p0 <= 0.0:
        raise ValueError("p_0 must be positive")
    return (dx - x) ** 2 / (x * p0) * math.exp(-theta)


def damped_kinetic(xi, theta: float, dxi=None) -> float:
    """Kinetic energy F/4 under the constant-phase working assumption."""
    return 0.25 * damped_fisher(xi, theta, dxi)


# -- damped geodesic ---------------------------------------------------------


@dataclass(frozen=True)
class DampedGeodesicParams:
    """Damped geodesic data: Lagrangian scale L0, decay rate gamma, and the
    two Bessel integration constants."""

    l0: float
    gamma: float
    a: float
    b: float

    def __post_init__(self) -> None:
        if self.l0 <= 0.0 or self.gamma <= 0.0:
            raise ValueError("L0 and gamma must be positive")


def damped_geodesic_solve(
    l0: float,
    gamma: float,
    q0: float,
    qdot0: float,
    theta_end: float,
    dtheta: float = 1e-3,
) -> GeodesicSolution:
    """RK4 integration of q'' + gamma q' + (L0/2) e^{-gamma theta} q = 0."""
    if l0 < 0.0 or gamma < 0.0:
        raise ValueError("L0 and gamma must be nonnegative")
    if dtheta <= 0.0 or theta_end <= 0.0:
        raise ValueError("step and horizon must be positive")

    def deriv(t, y):
        q, qd = y
        return np.array([qd, -gamma * qd - 0.5 * l0 * math.exp(-gamma * t) * q])

    ts, ys = _rk4(deriv, np.array([q0, qdot0], dtype=np.float64), 0.0, theta_end, dtheta)
    q = ys[:, :1]
    qdot = ys[:, 1:]
    resid = 0.0
    for i in range(1, len(ts) - 1):
        h = ts[i + 1] - ts[i]
        if abs((ts[i] - ts[i - 1]) - h) > 1e-12 * max(1.0, h):
            continue
        d2q = (q[i + 1, 0] - 2.0 * q[i, 0] + q[i - 1, 0]) / (h * h)
        dq = (q[i + 1, 0] - q[i - 1, 0]) / (2.0 * h)
        resid = max(
            resid,
            abs(d2q + gamma * dq + 0.5 * l0 * math.exp(-gamma * ts[i]) * q[i, 0]),
        )
    return GeodesicSolution(thetas=ts, q=q, qdot=qdot, residual_max=resid)


def bessel_argument(theta: float, l0: float, gamma: float) -> float:
    return math.sqrt(2.0 * l0 / (gamma * gamma)) * math.exp(-0.5 * gamma * theta)


def bessel_solution(theta: float, a: float, b: float, l0: float, gamma: float) -> float:
    """Closed-form damped geodesic
    q = sqrt(L0/(2 gamma^2)) e^{-gamma theta/2} [A J1(z) + B Y1(z)],
    z = sqrt(2 L0/gamma^2) e^{-gamma theta/2}.

    The second-kind branch diverges as z -> 0 (theta -> infinity); evaluation
    is allowed there and simply reports the divergent value.
    """
    if l0 <= 0.0 or gamma <= 0.0:
        raise ValueError("L0 and gamma must be positive")
    z = bessel_argument(theta, l0, gamma)
    value = a * bessel.j1(z) if a != 0.0 else 0.0
    if b != 0.0:
        value += b * bessel.y1(z)
    return math.sqrt(l0 / (2.0 * gamma * gamma)) * math.exp(-0.5 * gamma * theta) * value


def bessel_ode_residual(theta: float, a: float, b: float, l0: float, gamma: float) -> float:
    """Residual of the closed form under the damped geodesic equation,
    second derivative by central differences.

    The probe step is wider than the first-derivative default: a second
    difference amplifies function roundoff by 1/h^2, and h = 1e-3 balances
    that against the h^2 truncation term.
    """
    h = 1e-3
    qm = bessel_solution(theta - h, a, b, l0, gamma)
    q0 = bessel_solution(theta, a, b, l0, gamma)
    qp = bessel_solution(theta + h, a, b, l0, gamma)
    d2q = (qp - 2.0 * q0 + qm) / (h * h)
    dq = (qp - qm) / (2.0 * h)
    return d2q + gamma * dq + 0.5 * l0 * math.exp(-gamma * theta) * q0


def asymptotic_probabilities(a: float, theta: float) -> tuple[float, float]:
    """Asymptotic damped probabilities p_1 = A e^{-2 theta}, p_0 = 1 - p_1.

    At theta = 0 with A = 1 the pair degenerates to (0, 1), the boundary of
    validity of the expansion.
    """
    if not 0.0 < a <= 1.0:
        raise ValueError("amplitude constant must lie in (0, 1]")
    if theta < 0.0:
        raise ValueError("theta must be nonnegative")
    p1 = a * math.exp(-2.0 * theta)
    return 1.0 - p1, p1


def fit_p1_decay_exponent(
    a: float = 1.0,
    l0: float = 2.0,
    gamma: float = 1.0,
    window: tuple[float, float] = (4.0, 10.0),
    samples: int = 200,
) -> float:
    """Least-squares slope of log p_1 vs theta for the first-kind closed form.

    The window sits in the asymptotic regime: closer to the origin the
    next-order Bessel term still contributes a percent-level correction.
    """
    thetas = np.linspace(window[0], window[1], samples)
    logs = np.array(
        [2.0 * math.log(abs(bessel_solution(t, a, 0.0, l0, gamma))) for t in thetas]
    )
    slope, _intercept = np.polyfit(thetas, logs, 1)
    return float(slope)
