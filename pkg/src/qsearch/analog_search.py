"""Continuous-time search on the two-dimensional search plane.

Two Hamiltonians are covered (hbar = 1 throughout):

- the commutator-built search Hamiltonian whose evolution reproduces the
  digital iterate exactly; its plane matrix is (2 beta / sqrt(N)) times
  [[0, i], [-i, 0]] in the (target, bad) basis and the propagator has the
  closed form cos(x) I + sin(x) [[0, 1], [-1, 0]] with x = 2 beta t / sqrt(N);
- the two-projector driving Hamiltonian E(|target><target| + |psi><psi|),
  evolved numerically with a fixed-step 4th-order integrator.

The printed closed form for the optimal search time carries an arcsine whose
argument exceeds one; we evaluate asin(sqrt((N-1)/N)) instead, which restores
the intended (pi/4) sqrt(N) asymptote and drives the target probability to
one exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TOL_ALG = 1e-12

_SZ_SX = np.array([[0.0, 1.0], [-1.0, 0.0]])  # sigma_z sigma_x on the plane


def alpha_beta(n: int) -> tuple[float, float]:
    """Plane coordinates of the uniform state: alpha = 1/sqrt(N) on the
    target, beta = sqrt((N-1)/N) on the bad direction."""
    if n < 2:
        raise ValueError("N must be at least 2")
    return 1.0 / math.sqrt(n), math.sqrt((n - 1) / n)


@dataclass(frozen=True)
class PlaneHamiltonian:
    """2x2 Hermitian generator on the search plane."""

    matrix: np.ndarray
    model: str
    n: int
    energy: float | None = None

    def __post_init__(self) -> None:
        h = self.matrix
        if h.shape != (2, 2):
            raise ValueError("plane Hamiltonian must be 2x2")
        if np.max(np.abs(h - h.conj().T)) > TOL_ALG * max(1.0, np.max(np.abs(h))):
            raise ValueError("plane Hamiltonian must be Hermitian")


@dataclass(frozen=True)
class EvolutionResult:
    """State coordinates on (target, bad) at time t and the target probability."""

    t: float
    state: np.ndarray
    p_target: float


def fenner_matrix(n: int) -> PlaneHamiltonian:
    """Commutator-built search Hamiltonian on the (target, bad) plane."""
    _, beta = alpha_beta(n)
    pref = 2.0 * beta / math.sqrt(n)
    h = pref * np.array([[0.0, 1j], [-1j, 0.0]])
    return PlaneHamiltonian(matrix=h, model="fenner", n=n)


def fenner_evolve(t: float, n: int) -> np.ndarray:
    """Closed-form propagator cos(x) I + sin(x) sigma_z sigma_x."""
    _, beta = alpha_beta(n)
    x = 2.0 * beta * t / math.sqrt(n)
    return math.cos(x) * np.eye(2) + math.sin(x) * _SZ_SX


def fenner_state(t: float, n: int) -> EvolutionResult:
    """Evolved uniform state; target probability matches
    [alpha cos(x) + beta sin(x)]^2."""
    alpha, beta = alpha_beta(n)
    state = fenner_evolve(t, n) @ np.array([alpha, beta])
    return EvolutionResult(t=t, state=state, p_target=float(abs(state[0]) ** 2))


def fenner_time(n: int) -> float:
    """Search time (N / (2 sqrt(N-1))) asin(sqrt((N-1)/N)); asymptotically
    (pi/4) sqrt(N), and p_target(fenner_time) = 1 exactly."""
    if n < 2:
        raise ValueError("N must be at least 2")
    return n / (2.0 * math.sqrt(n - 1)) * math.asin(math.sqrt((n - 1) / n))


def unitary_series_exp(generator: np.ndarray, t: float) -> np.ndarray:
    """exp(generator * t) for a 2x2 anti-Hermitian generator, by scaling and
    squaring a Taylor series converged to machine precision."""
    g = np.asarray(generator, dtype=np.complex128)
    if g.shape != (2, 2):
        raise ValueError("generator must be 2x2")
    skew = np.max(np.abs(g + g.conj().T))
    if skew > 1e-9 * max(1.0, np.max(np.abs(g))):
        raise ValueError("generator must be anti-Hermitian")
    m = g * t
    norm = np.max(np.abs(m))
    squarings = max(0, int(math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0)
    m /= 2.0**squarings
    term = np.eye(2, dtype=np.complex128)
    out = np.eye(2, dtype=np.complex128)
    for k in range(1, 40):
        term = term @ m / k
        out += term
        if np.max(np.abs(term)) < 1e-18:
            break
    for _ in range(squarings):
        out = out @ out
    return out


def farhi_gutmann_matrix(n: int, energy: float) -> PlaneHamiltonian:
    """Two-projector Hamiltonian E(P_target + P_uniform) on the orthonormal
    (target, bad) basis."""
    if energy <= 0.0:
        raise ValueError("energy scale must be positive")
    alpha, beta = alpha_beta(n)
    h = energy * np.array(
        [[1.0 + alpha * alpha, alpha * beta], [alpha * beta, beta * beta]],
        dtype=np.complex128,
    )
    return PlaneHamiltonian(matrix=h, model="farhi-gutmann", n=n, energy=energy)


def _fg_step_size(n: int, energy: float) -> float:
    # one ten-thousandth of the commutator-model period, shrunk further for
    # strong driving so the local truncation error stays phase-dominated
    _, beta = alpha_beta(n)
    period = math.pi * math.sqrt(n) / beta
    return period / (1.0e4 * max(1.0, energy))


def _rk4_step(h: np.ndarray, psi: np.ndarray, dt: float) -> np.ndarray:
    def deriv(v):
        return -1j * (h @ v)

    k1 = deriv(psi)
    k2 = deriv(psi + 0.5 * dt * k1)
    k3 = deriv(psi + 0.5 * dt * k2)
    k4 = deriv(psi + dt * k3)
    out = psi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return out / np.linalg.norm(out)


@dataclass(frozen=True)
class FgTrajectory:
    n: int
    energy: float
    ts: np.ndarray
    states: np.ndarray
    p_target: np.ndarray


def fg_scan(n: int, energy: float, t_max: float | None = None, samples: int = 10**4) -> FgTrajectory:
    """Integrate the two-projector evolution from the uniform state over a
    uniform time grid."""
    ham = farhi_gutmann_matrix(n, energy)
    if t_max is None:
        # the first probability peak falls at (pi/2) sqrt(N)/E; scan half a
        # peak period beyond it so the maximum is interior to the window
        t_max = 3.0 * (math.pi / 4.0) * math.sqrt(n) / energy
    if t_max <= 0.0 or samples < 2:
        raise ValueError("scan needs positive horizon and at least two samples")
    alpha, beta = alpha_beta(n)
    ts = np.linspace(0.0, t_max, samples)
    grid_dt = ts[1] - ts[0]
    h_step = _fg_step_size(n, energy)
    substeps = max(1, int(math.ceil(grid_dt / h_step)))
    dt = grid_dt / substeps
    psi = np.array([alpha, beta], dtype=np.complex128)
    states = np.empty((samples, 2), dtype=np.complex128)
    states[0] = psi
    for i in range(1, samples):
        for _ in range(substeps):
            psi = _rk4_step(ham.matrix, psi, dt)
        states[i] = psi
    p = np.abs(states[:, 0]) ** 2
    return FgTrajectory(n=n, energy=energy, ts=ts, states=states, p_target=p)


def _fg_probability_from(traj: FgTrajectory, t: float) -> float:
    """Target probability at an off-grid time, continuing the integration
    from the nearest grid point below."""
    if t <= traj.ts[0]:
        return float(traj.p_target[0])
    idx = min(int(t // (traj.ts[1] - traj.ts[0])), len(traj.ts) - 1)
    psi = traj.states[idx].copy()
    remainder = t - traj.ts[idx]
    if remainder > 0.0:
        h_step = _fg_step_size(traj.n, traj.energy)
        substeps = max(1, int(math.ceil(remainder / h_step)))
        dt = remainder / substeps
        ham = farhi_gutmann_matrix(traj.n, traj.energy)
        for _ in range(substeps):
            psi = _rk4_step(ham.matrix, psi, dt)
    return float(abs(psi[0]) ** 2)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def fg_first_peak(n: int, energy: float) -> tuple[float, float]:
    """Time and value of the first maximum of the target probability.

    Dense scan to bracket the first peak, then golden-section refinement to
    1e-10 time resolution.
    """
    traj = fg_scan(n, energy)
    p = traj.p_target
    idx = None
    for i in range(1, len(p) - 1):
        if p[i] >= p[i - 1] and p[i] >= p[i + 1] and p[i] > p[0]:
            idx = i
            break
    if idx is None:
        raise ValueError("no interior probability peak inside the scan window")
    lo, hi = traj.ts[idx - 1], traj.ts[idx + 1]
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = _fg_probability_from(traj, c)
    fd = _fg_probability_from(traj, d)
    while b - a > 1e-10:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = _fg_probability_from(traj, c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = _fg_probability_from(traj, d)
    t_peak = 0.5 * (a + b)
    return t_peak, _fg_probability_from(traj, t_peak)
