"""First-order Bessel functions of the first and second kind.

Self-contained double-precision implementations: ascending power series up to
z = 12 and Hankel-style asymptotic trigonometric expansions beyond, with the
asymptotic tails truncated at their smallest term.  Validation lives with the
damped-geodesic tests, which check the functions against the differential
equation they are meant to solve rather than against an external library.
"""
from __future__ import annotations

import math

_SERIES_CUTOFF = 12.0
_EULER_GAMMA = 0.5772156649015328606


def j1(z: float) -> float:
    """Bessel function of the first kind, order one."""
    if z < 0.0:
        return -j1(-z)
    if z == 0.0:
        return 0.0
    if z <= _SERIES_CUTOFF:
        return _j1_series(z)
    p, q = _hankel_pq(z)
    amp = math.sqrt(2.0 / (math.pi * z))
    chi = z - 0.75 * math.pi
    return amp * (p * math.cos(chi) - q * math.sin(chi))


def y1(z: float) -> float:
    """Bessel function of the second kind, order one; requires z > 0."""
    if z <= 0.0:
        raise ValueError("y1 requires a positive argument")
    if z <= _SERIES_CUTOFF:
        return _y1_series(z)
    p, q = _hankel_pq(z)
    amp = math.sqrt(2.0 / (math.pi * z))
    chi = z - 0.75 * math.pi
    return amp * (p * math.sin(chi) + q * math.cos(chi))


def _j1_series(z: float) -> float:
    half = 0.5 * z
    term = half
    total = term
    zz = half * half
    for k in range(1, 60):
        term *= -zz / (k * (k + 1))
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            break
    return total


def _y1_series(z: float) -> float:
    half = 0.5 * z
    zz = half * half
    # sum (-1)^k (h_k + h_{k+1}) / (k! (k+1)!) (z/2)^{2k+1}, h_m = psi(m+1)
    coeff = half  # (z/2)^{2k+1} / (k!(k+1)!)
    h_k = -_EULER_GAMMA
    h_k1 = 1.0 - _EULER_GAMMA
    total = coeff * (h_k + h_k1)
    for k in range(1, 60):
        coeff *= -zz / (k * (k + 1))
        h_k = h_k1
        h_k1 += 1.0 / (k + 1.0)
        term = coeff * (h_k + h_k1)
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            break
    return (2.0 / math.pi) * (math.log(0.5 * z) * _j1_series(z) - 1.0 / z) - total / math.pi


def _hankel_pq(z: float) -> tuple[float, float]:
    """Asymptotic amplitude series P and Q for order one, truncated at the
    smallest term."""
    mu = 4.0
    p = 1.0
    q = 0.0
    a_k = 1.0
    prev = math.inf
    for k in range(1, 40):
        a_k *= (mu - (2 * k - 1) ** 2) / (8.0 * k)
        term = a_k / z**k
        if abs(term) >= prev:
            break
        prev = abs(term)
        if (k // 2) % 2 == 1:
            term = -term
        if k % 2 == 1:
            q += term
        else:
            p += term
        if abs(term) < 1e-18:
            break
    return p, q
