"""Metrics on parametric families, geodesics, step counting, thermal Fisher.

A parametric family bundles component probabilities p_l(theta) and optional
phases phi_l(theta) with analytic derivatives when available; central finite
differences (relative step 1e-5) fill in otherwise.  The Fisher information
is computed through the square-root form 4 sum (d sqrt(p))^2, which stays
finite where components vanish; the p'^2/p form is used only where p is
safely positive.

Geodesics in amplitude coordinates q_l = sqrt(p_l) obey q'' + q = 0 once the
Fisher information is constant at 4 and the normalization multiplier is fixed
at one; the integrator here is classic fixed-step RK4.

Step counting follows the general iterate G = -I_i U^{-1} I_f U built from two
selective inversions around arbitrary unitaries: the squared Wigner-Yanase
step length is 16 u^2 (1 - u^2) with u the transition amplitude modulus, the
remaining distance is 4 (1 - u^2), and the equal-step count scales as 1/(2u).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

FD_REL_STEP = 1e-5
_P_FLOOR = 1e-12


def _fd_step(theta: float) -> float:
    return FD_REL_STEP * max(1.0, abs(theta))


def _central_diff(f: Callable[[float], np.ndarray], theta: float) -> np.ndarray:
    h = _fd_step(theta)
    return (np.asarray(f(theta + h)) - np.asarray(f(theta - h))) / (2.0 * h)


@dataclass(frozen=True)
class ParametricFamily:
    """Discrete probability/phase family over one real parameter.

    ``p(theta)`` returns the N component probabilities; ``dp`` its analytic
    derivative when available.  ``phi``/``dphi`` are the component phases,
    treated as identically zero when omitted.
    """

    n: int
    p: Callable[[float], np.ndarray]
    dp: Callable[[float], np.ndarray] | None = None
    phi: Callable[[float], np.ndarray] | None = None
    dphi: Callable[[float], np.ndarray] | None = None
    domain: tuple[float, float] = (0.0, math.pi / 2)

    def check_theta(self, theta: float) -> None:
        lo, hi = self.domain
        if not lo <= theta <= hi:
            raise ValueError(f"theta {theta} outside family domain [{lo}, {hi}]")

    def probabilities(self, theta: float) -> np.ndarray:
        return np.asarray(self.p(theta), dtype=np.float64)

    def dprobabilities(self, theta: float) -> np.ndarray:
        if self.dp is not None:
            return np.asarray(self.dp(theta), dtype=np.float64)
        return _central_diff(self.p, theta)

    def phases(self, theta: float) -> np.ndarray:
        if self.phi is None:
            return np.zeros(self.n)
        return np.asarray(self.phi(theta), dtype=np.float64)

    def dphases(self, theta: float) -> np.ndarray:
        if self.phi is None:
            return np.zeros(self.n)
        if self.dphi is not None:
            return np.asarray(self.dphi(theta), dtype=np.float64)
        return _central_diff(self.phi, theta)

    def amplitudes(self, theta: float) -> np.ndarray:
        return np.sqrt(self.probabilities(theta)) * np.exp(1j * self.phases(theta))


@dataclass(frozen=True)
class MetricSample:
    theta: float
    g: float


def metric_profile(family: "ParametricFamily", thetas) -> list[MetricSample]:
    """Fisher-Rao metric sampled along a parameter grid."""
    return [MetricSample(theta=float(t), g=fisher_rao(family, float(t))) for t in thetas]


@dataclass(frozen=True)
class GeodesicSolution:
    thetas: np.ndarray
    q: np.ndarray
    qdot: np.ndarray
    residual_max: float


def grover_family(n: int) -> ParametricFamily:
    """Search family p_0 = sin^2(theta), p_l = cos^2(theta)/(N-1)."""
    if n < 2:
        raise ValueError("N must be at least 2")

    def p(theta: float) -> np.ndarray:
        out = np.full(n, math.cos(theta) ** 2 / (n - 1))
        out[0] = math.sin(theta) ** 2
        return out

    def dp(theta: float) -> np.ndarray:
        s2 = math.sin(2.0 * theta)
        out = np.full(n, -s2 / (n - 1))
        out[0] = s2
        return out

    return ParametricFamily(n=n, p=p, dp=dp)


def _sqrt_p_derivatives(family: ParametricFamily, theta: float) -> np.ndarray:
    """d sqrt(p_l)/d theta, analytic where p_l is safely positive, finite
    difference on sqrt(p) elsewhere."""
    p = family.probabilities(theta)
    out = np.empty_like(p)
    if family.dp is not None:
        dp = family.dprobabilities(theta)
        safe = p > _P_FLOOR
        out[safe] = dp[safe] / (2.0 * np.sqrt(p[safe]))
        if not np.all(safe):
            fd = _central_diff(lambda t: np.sqrt(family.probabilities(t)), theta)
            out[~safe] = fd[~safe]
    else:
        out = _central_diff(lambda t: np.sqrt(family.probabilities(t)), theta)
    return out


def fisher_rao(family: ParametricFamily, theta: float) -> float:
    """Fisher-Rao metric component 4 sum (d sqrt(p))^2."""
    family.check_theta(theta)
    ds = _sqrt_p_derivatives(family, theta)
    return float(4.0 * np.sum(ds * ds))


def fisher_information(family: ParametricFamily, theta: float) -> float:
    """Fisher information function; identical to the Fisher-Rao component for
    one-parameter families."""
    return fisher_rao(family, theta)


def wigner_yanase_line_element(family: ParametricFamily, theta: float, dtheta: float) -> float:
    """ds^2 = {F + 4 [sum p phi'^2 - (sum p phi')^2]} dtheta^2."""
    family.check_theta(theta)
    f = fisher_rao(family, theta)
    p = family.probabilities(theta)
    dphi = family.dphases(theta)
    mean_current = float(np.sum(p * dphi))
    phase_term = 4.0 * (float(np.sum(p * dphi * dphi)) - mean_current**2)
    return (f + phase_term) * dtheta * dtheta


def current_density(family: ParametricFamily, theta: float, l: int) -> float:
    """Normalized current density J_theta(l) = phi_l'(theta)."""
    if not 0 <= l < family.n:
        raise ValueError("component index out of range")
    return float(family.dphases(theta)[l])


def kinetic_energy(family: ParametricFamily, theta: float) -> float:
    """<d psi | d psi> by direct finite differencing of the amplitudes."""
    family.check_theta(theta)
    dpsi = _central_diff(family.amplitudes, theta)
    return float(np.sum(np.abs(dpsi) ** 2))


def kinetic_energy_via_current(family: ParametricFamily, theta: float) -> float:
    """Same energy through F/4 + sum J^2 p; equality with
    :func:`kinetic_energy` is the two-route consistency check."""
    family.check_theta(theta)
    p = family.probabilities(theta)
    j = family.dphases(theta)
    return fisher_rao(family, theta) / 4.0 + float(np.sum(j * j * p))


def state_overlap(family: ParametricFamily, theta_a: float, theta_b: float) -> complex:
    a = family.amplitudes(theta_a)
    b = family.amplitudes(theta_b)
    return complex(np.vdot(a, b))


# -- geodesics ---------------------------------------------------------------


def geodesic_residual(
    q_path,
    theta: float,
    lagrangian: Callable[[float], float] | float = 2.0,
    lam: float = 1.0,
) -> np.ndarray:
    """Residual q'' - (L'/L) q' + (lam/2) L q at one parameter value.

    ``q_path`` is either a callable theta -> q array (derivatives by central
    differences) or a (q, dq, d2q) triple of callables for analytic
    derivatives.  ``lagrangian`` is a constant or a callable L(theta).
    """
    if isinstance(q_path, tuple):
        qf, dqf, d2qf = q_path
        q = np.asarray(qf(theta), dtype=np.float64)
        dq = np.asarray(dqf(theta), dtype=np.float64)
        d2q = np.asarray(d2qf(theta), dtype=np.float64)
    else:
        q = np.asarray(q_path(theta), dtype=np.float64)
        dq = _central_diff(q_path, theta)
        h = _fd_step(theta)
        d2q = (np.asarray(q_path(theta + h)) - 2.0 * q + np.asarray(q_path(theta - h))) / (h * h)
    if callable(lagrangian):
        lag = float(lagrangian(theta))
        dlag = _central_diff(lambda t: np.array([lagrangian(t)]), theta)[0]
    else:
        lag = float(lagrangian)
        dlag = 0.0
    return d2q - (dlag / lag) * dq + 0.5 * lam * lag * q


def _rk4(deriv, y0: np.ndarray, t0: float, t1: float, dt: float):
    """Classic fixed-step RK4; the final step is shortened to land on t1."""
    steps = max(1, int(math.ceil((t1 - t0) / dt - 1e-12)))
    ts = np.empty(steps + 1)
    ys = np.empty((steps + 1,) + y0.shape)
    t, y = t0, y0.astype(np.float64)
    ts[0], ys[0] = t, y
    for i in range(steps):
        h = min(dt, t1 - t)
        k1 = deriv(t, y)
        k2 = deriv(t + h / 2, y + h / 2 * k1)
        k3 = deriv(t + h / 2, y + h / 2 * k2)
        k4 = deriv(t + h, y + h * k3)
        y = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t + h
        ts[i + 1], ys[i + 1] = t, y
    return ts, ys


def solve_geodesic(
    n: int,
    q0: Sequence[float],
    qdot0: Sequence[float],
    theta_end: float,
    dtheta: float,
) -> GeodesicSolution:
    """Integrate q'' + q = 0 (constant Lagrangian 2, unit multiplier) from
    normalized amplitudes q0."""
    q0 = np.asarray(q0, dtype=np.float64)
    qdot0 = np.asarray(qdot0, dtype=np.float64)
    if q0.shape != (n,) or qdot0.shape != (n,):
        raise ValueError("initial data must have length N")
    if abs(np.sum(q0 * q0) - 1.0) > 1e-8:
        raise ValueError("initial amplitudes must be normalized")
    if dtheta <= 0.0:
        raise ValueError("step must be positive")

    def deriv(_t, y):
        return np.concatenate([y[n:], -y[:n]])

    ts, ys = _rk4(deriv, np.concatenate([q0, qdot0]), 0.0, theta_end, dtheta)
    q = ys[:, :n]
    qdot = ys[:, n:]
    resid = 0.0
    for i in range(1, len(ts) - 1):
        h = ts[i + 1] - ts[i]
        if abs((ts[i] - ts[i - 1]) - h) > 1e-12 * max(1.0, h):
            continue  # skip the shortened final interval
        d2q = (q[i + 1] - 2.0 * q[i] + q[i - 1]) / (h * h)
        resid = max(resid, float(np.max(np.abs(d2q + q[i]))))
    return GeodesicSolution(thetas=ts, q=q, qdot=qdot, residual_max=resid)


def christoffel(
    metric_fn: Callable[[float], float],
    theta: float,
    dmetric_fn: Callable[[float], float] | None = None,
) -> float:
    """One-parameter Christoffel coefficient (1/2) g^{-1} g'."""
    g = float(metric_fn(theta))
    if g <= 0.0:
        raise ValueError("metric must be positive")
    if dmetric_fn is not None:
        dg = float(dmetric_fn(theta))
    else:
        dg = _central_diff(lambda t: np.array([metric_fn(t)]), theta)[0]
    return 0.5 * dg / g


# -- step counting -----------------------------------------------------------


def _check_u(u: float) -> None:
    if not 0.0 < u <= 1.0:
        raise ValueError("transition amplitude modulus must lie in (0, 1]")


def wy_step_length(u: float) -> float:
    """Squared Wigner-Yanase length of one iterate step: 16 u^2 (1 - u^2)."""
    _check_u(u)
    return 16.0 * u * u * (1.0 - u * u)


def wy_total_length(u: float) -> float:
    """Squared Wigner-Yanase distance to the rotated target: 4 (1 - u^2)."""
    _check_u(u)
    return 4.0 * (1.0 - u * u)


def steps_estimate(u: float) -> float:
    """Equal-length step count sqrt(total/step) = 1/(2u).

    The closed forms fix the proportionality constant at one half; u = 1 is a
    zero-length degenerate step and is rejected.
    """
    _check_u(u)
    if u == 1.0:
        raise ValueError("u = 1 gives zero step length; the count is undefined")
    return 1.0 / (2.0 * u)


def general_iterate(u_mat: np.ndarray, i: int, f: int) -> np.ndarray:
    """General search iterate G = -I_i U^{-1} I_f U for basis states i, f."""
    u_mat = np.asarray(u_mat, dtype=np.complex128)
    n = u_mat.shape[0]
    if u_mat.shape != (n, n):
        raise ValueError("U must be square")
    if np.max(np.abs(u_mat.conj().T @ u_mat - np.eye(n))) > 1e-10:
        raise ValueError("U must be unitary")
    if not (0 <= i < n and 0 <= f < n):
        raise ValueError("state indices out of range")
    ii = np.eye(n, dtype=np.complex128)
    ii[i, i] = -1.0
    if_ = np.eye(n, dtype=np.complex128)
    if_[f, f] = -1.0
    return -ii @ u_mat.conj().T @ if_ @ u_mat


@dataclass(frozen=True)
class StepGeometryReport:
    """Per-step Wigner-Yanase lengths, norms, and the plane-restricted
    determinant of the general iterate."""

    u: float
    step_lengths: np.ndarray
    norms: np.ndarray
    closed_form_step: float
    restricted_determinant: complex
    expected_determinant: float

    def max_step_spread(self) -> float:
        return float(np.max(self.step_lengths) - np.min(self.step_lengths))

    def max_norm_error(self) -> float:
        return float(np.max(np.abs(self.norms - 1.0)))


def verify_step_geometry(u_mat: np.ndarray, i: int, f: int, n_steps: int | None = None) -> StepGeometryReport:
    """Walk the iterate and report step lengths, norms, and the restricted
    determinant 1 - u^2."""
    g = general_iterate(u_mat, i, f)
    n = g.shape[0]
    u_fi = complex(np.asarray(u_mat)[f, i])
    u = abs(u_fi)
    if u == 0.0:
        raise ValueError("zero transition amplitude: the iterate never moves")
    if n_steps is None:
        n_steps = min(200, max(4, int(math.ceil(1.0 / (2.0 * u)))))
    psi = np.zeros(n, dtype=np.complex128)
    psi[i] = 1.0
    lengths = np.empty(n_steps)
    norms = np.empty(n_steps)
    for k in range(n_steps):
        nxt = g @ psi
        overlap = np.vdot(psi, nxt)
        lengths[k] = 4.0 * (1.0 - abs(overlap) ** 2)
        norms[k] = float(np.linalg.norm(nxt))
        psi = nxt
    psi_i = np.zeros(n, dtype=np.complex128)
    psi_i[i] = 1.0
    psi_f_back = u_mat.conj().T[:, f].copy()  # U^{-1} |f>
    m = np.array(
        [
            [np.vdot(psi_i, g @ psi_i), np.vdot(psi_i, g @ psi_f_back)],
            [np.vdot(psi_f_back, g @ psi_i), np.vdot(psi_f_back, g @ psi_f_back)],
        ]
    )
    return StepGeometryReport(
        u=u,
        step_lengths=lengths,
        norms=norms,
        closed_form_step=wy_step_length(u),
        restricted_determinant=complex(np.linalg.det(m)),
        expected_determinant=1.0 - u * u,
    )


# -- thermal Fisher information ----------------------------------------------


def boltzmann_weights(energies: np.ndarray, beta: float) -> np.ndarray:
    energies = np.asarray(energies, dtype=np.float64)
    if energies.size == 0:
        raise ValueError("energy table must be nonempty")
    if beta <= 0.0:
        raise ValueError("inverse temperature must be positive")
    shifted = -beta * (energies - energies.min())
    w = np.exp(shifted)
    return w / w.sum()


def thermal_fisher(energies, denergies, beta: float) -> float:
    """Fisher information beta^2 Var(dE/dtheta) of a Boltzmann family whose
    energies depend on an external parameter."""
    weights = boltzmann_weights(energies, beta)
    de = np.asarray(denergies, dtype=np.float64)
    if de.shape != weights.shape:
        raise ValueError("one energy derivative per level required")
    mean = float(np.sum(weights * de))
    return beta * beta * float(np.sum(weights * (mean - de) ** 2))


def thermal_fisher_beta(energies, beta: float) -> float:
    """Fisher information with respect to the inverse temperature itself:
    the score is <E> - E(x), so the information equals the energy variance."""
    weights = boltzmann_weights(energies, beta)
    e = np.asarray(energies, dtype=np.float64)
    mean = float(np.sum(weights * e))
    return float(np.sum(weights * (mean - e) ** 2))
