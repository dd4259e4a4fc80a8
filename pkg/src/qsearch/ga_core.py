"""Signature-generic real Clifford algebra kernel.

Multivectors are dense real coefficient arrays of length 2**(p+q), indexed by
blade bitmask: bit i set means basis vector e_{i+1} is present, and blades are
read in ascending index order.  The first ``p`` basis vectors square to +1,
the remaining ``q`` to -1, so ``Signature(3, 0)`` is the algebra of physical
space and ``Signature(1, 3)`` the spacetime algebra.

Everything here is a pure function over immutable values: coefficient arrays
are frozen after construction, so multivectors are safe to share across
worker processes or threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

TOL_ALG = 1e-12

# Sign tables are precomputed and cached per signature up to this dimension;
# beyond it the 2^d x 2^d table would dominate memory and signs are computed
# pairwise instead.
_TABLE_MAX_DIM = 8


@dataclass(frozen=True)
class Signature:
    """Clifford algebra signature: p basis squares of +1, q of -1."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 0 or self.q < 0:
            raise ValueError("signature counts must be nonnegative")
        if self.p + self.q > 16:
            raise ValueError("p + q must not exceed 16")

    @property
    def dim(self) -> int:
        return self.p + self.q

    @property
    def size(self) -> int:
        return 1 << self.dim

    def metric(self) -> tuple[int, ...]:
        return (1,) * self.p + (-1,) * self.q


CL3 = Signature(3, 0)
CL13 = Signature(1, 3)


def _popcount(x: int) -> int:
    return x.bit_count()


def _reorder_sign(a: int, b: int) -> int:
    """Parity of the transpositions needed to merge blade b into blade a."""
    a >>= 1
    total = 0
    while a:
        total += _popcount(a & b)
        a >>= 1
    return -1 if total & 1 else 1


def _blade_sign(a: int, b: int, metric: Sequence[int]) -> int:
    sign = _reorder_sign(a, b)
    common = a & b
    i = 0
    while common:
        if common & 1:
            sign *= metric[i]
        common >>= 1
        i += 1
    return sign


@lru_cache(maxsize=None)
def _sign_table(sig: Signature) -> np.ndarray:
    metric = sig.metric()
    n = sig.size
    table = np.empty((n, n), dtype=np.int8)
    for a in range(n):
        for b in range(n):
            table[a, b] = _blade_sign(a, b, metric)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def _grades(sig: Signature) -> np.ndarray:
    g = np.array([_popcount(k) for k in range(sig.size)], dtype=np.int64)
    g.setflags(write=False)
    return g


@lru_cache(maxsize=None)
def _reverse_signs(sig: Signature) -> np.ndarray:
    g = _grades(sig)
    signs = np.where((g * (g - 1) // 2) % 2 == 0, 1.0, -1.0)
    signs.setflags(write=False)
    return signs


class Multivector:
    """Dense real multivector over a fixed signature.

    Instances are immutable; arithmetic returns new objects.
    """

    __slots__ = ("sig", "coeffs")

    def __init__(self, sig: Signature, coeffs) -> None:
        arr = np.array(coeffs, dtype=np.float64)
        if arr.shape != (sig.size,):
            raise ValueError(f"expected {sig.size} coefficients, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(sig: Signature) -> "Multivector":
        return Multivector(sig, np.zeros(sig.size))

    @staticmethod
    def scalar(sig: Signature, value: float) -> "Multivector":
        c = np.zeros(sig.size)
        c[0] = value
        return Multivector(sig, c)

    @staticmethod
    def blade(sig: Signature, mask: int, value: float = 1.0) -> "Multivector":
        if not 0 <= mask < sig.size:
            raise ValueError("blade mask out of range")
        c = np.zeros(sig.size)
        c[mask] = value
        return Multivector(sig, c)

    @staticmethod
    def basis_vector(sig: Signature, k: int) -> "Multivector":
        """Basis vector e_k, 1-indexed."""
        if not 1 <= k <= sig.dim:
            raise ValueError("basis index out of range")
        return Multivector.blade(sig, 1 << (k - 1))

    @staticmethod
    def vector(sig: Signature, components) -> "Multivector":
        comp = np.asarray(components, dtype=np.float64)
        if comp.shape != (sig.dim,):
            raise ValueError("component count must match dimension")
        c = np.zeros(sig.size)
        for i, v in enumerate(comp):
            c[1 << i] = v
        return Multivector(sig, c)

    # -- structure ----------------------------------------------------------

    def grades(self) -> set[int]:
        present = np.abs(self.coeffs) > 0.0
        return set(int(g) for g in np.unique(_grades(self.sig)[present]))

    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def vector_components(self) -> np.ndarray:
        return np.array([self.coeffs[1 << i] for i in range(self.sig.dim)])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.sig.size else 0.0

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Multivector") -> "Multivector":
        _check_sig(self, other)
        return Multivector(self.sig, self.coeffs + other.coeffs)

    def __sub__(self, other: "Multivector") -> "Multivector":
        _check_sig(self, other)
        return Multivector(self.sig, self.coeffs - other.coeffs)

    def __neg__(self) -> "Multivector":
        return Multivector(self.sig, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return Multivector(self.sig, self.coeffs * float(other))

    def __rmul__(self, other):
        return Multivector(self.sig, self.coeffs * float(other))

    def __repr__(self) -> str:
        parts = []
        for mask in range(self.sig.size):
            c = self.coeffs[mask]
            if c == 0.0:
                continue
            if mask == 0:
                parts.append(f"{c:g}")
            else:
                name = "e" + "".join(str(i + 1) for i in range(self.sig.dim) if mask >> i & 1)
                parts.append(f"{c:g}*{name}")
        body = " + ".join(parts) if parts else "0"
        return f"Multivector({self.sig.p},{self.sig.q}; {body})"


def _check_sig(a: Multivector, b: Multivector) -> None:
    if a.sig != b.sig:
        raise ValueError(f"signature mismatch: {a.sig} vs {b.sig}")


def allclose(a: Multivector, b: Multivector, tol: float = TOL_ALG) -> bool:
    _check_sig(a, b)
    return bool(np.all(np.abs(a.coeffs - b.coeffs) <= tol))


# -- core operations --------------------------------------------------------


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    """Associative bilinear product; blade signs from swap counting plus
    signature squares."""
    _check_sig(a, b)
    sig = a.sig
    out = np.zeros(sig.size)
    nz = np.nonzero(a.coeffs)[0]
    if sig.dim <= _TABLE_MAX_DIM:
        table = _sign_table(sig)
        idx = np.arange(sig.size)
        for i in nz:
            out[i ^ idx] += a.coeffs[i] * (table[i] * b.coeffs)
    else:
        metric = sig.metric()
        nzb = np.nonzero(b.coeffs)[0]
        for i in nz:
            ai = a.coeffs[i]
            for j in nzb:
                out[i ^ j] += ai * b.coeffs[j] * _blade_sign(int(i), int(j), metric)
    return Multivector(sig, out)


def grade_project(a: Multivector, g: int) -> Multivector:
    if not 0 <= g <= a.sig.dim:
        raise ValueError(f"grade {g} out of range for dimension {a.sig.dim}")
    keep = _grades(a.sig) == g
    return Multivector(a.sig, np.where(keep, a.coeffs, 0.0))


def reverse(a: Multivector) -> Multivector:
    """Reversion: grade-g blades pick up (-1)**(g(g-1)/2)."""
    return Multivector(a.sig, a.coeffs * _reverse_signs(a.sig))


def inner_product(a: Multivector, b: Multivector) -> Multivector:
    """Grade-lowering part: <a_r b_s>_{|r-s|}, extended bilinearly."""
    return _graded_product(a, b, lambda r, s: abs(r - s))


def outer_product(a: Multivector, b: Multivector) -> Multivector:
    """Grade-raising part: <a_r b_s>_{r+s}, extended bilinearly."""
    return _graded_product(a, b, lambda r, s: r + s)


def _graded_product(a: Multivector, b: Multivector, pick: Callable[[int, int], int]) -> Multivector:
    _check_sig(a, b)
    out = Multivector.zero(a.sig)
    for r in a.grades():
        ar = grade_project(a, r)
        for s in b.grades():
            target = pick(r, s)
            if target > a.sig.dim:
                continue
            out = out + grade_project(geometric_product(ar, grade_project(b, s)), target)
    return out


def scalar_product(a: Multivector, b: Multivector) -> float:
    return geometric_product(a, b).scalar_part()


def pseudoscalar(sig: Signature) -> Multivector:
    return Multivector.blade(sig, sig.size - 1)


def vector_norm(v: Multivector) -> float:
    """Norm sqrt(<v~ v>_0) of a grade-1 multivector."""
    sq = scalar_product(reverse(v), v)
    return math.sqrt(abs(sq))


def _require_grade(v: Multivector, g: int, what: str) -> None:
    stray = v.coeffs[_grades(v.sig) != g]
    if stray.size and np.max(np.abs(stray)) > TOL_ALG * max(1.0, v.max_abs()):
        raise ValueError(f"{what} must be homogeneous of grade {g}")


# -- reflections, rotors, orientation ---------------------------------------


def reflect(v: Multivector, a: Multivector) -> Multivector:
    """Reflection of vector v across the line of unit vector a: a v a."""
    _check_sig(v, a)
    _require_grade(v, 1, "reflected element")
    _require_grade(a, 1, "reflection axis")
    aa = scalar_product(a, a)
    if abs(aa - 1.0) > 1e-9:
        raise ValueError(f"reflection axis must be unit: a.a = {aa}")
    return geometric_product(geometric_product(a, v), a)


def mirror(v: Multivector, n: Multivector) -> Multivector:
    """Mirror image of vector v in the plane with unit normal n: -n v n.

    Unlike :func:`reflect` (which fixes the line of its axis and is proper in
    odd dimension), this is the improper orthogonal map with determinant -1.
    """
    _check_sig(v, n)
    _require_grade(v, 1, "mirrored element")
    _require_grade(n, 1, "mirror normal")
    nn = scalar_product(n, n)
    if abs(nn - 1.0) > 1e-9:
        raise ValueError(f"mirror normal must be unit: n.n = {nn}")
    return -geometric_product(geometric_product(n, v), n)


def _check_unit_plane(plane: Multivector) -> None:
    _require_grade(plane, 2, "rotation plane")
    sq = geometric_product(plane, plane)
    rest = sq.coeffs.copy()
    rest[0] = 0.0
    scale = max(1.0, plane.max_abs() ** 2)
    if np.max(np.abs(rest)) > 1e-9 * scale or abs(sq.scalar_part() + 1.0) > 1e-9:
        raise ValueError("rotation plane must be a unit simple bivector (B*B = -1)")


def bivector_exp(plane: Multivector, angle: float) -> Multivector:
    """exp(B*angle) = cos(angle) + B sin(angle) for a unit simple bivector B."""
    _check_unit_plane(plane)
    return Multivector.scalar(plane.sig, math.cos(angle)) + math.sin(angle) * plane


def rotate(v: Multivector, plane: Multivector, angle: float) -> Multivector:
    """Rotate vector v by angle in the given unit bivector plane.

    Implemented as the half-angle sandwich exp(-B angle/2) v exp(B angle/2);
    for the e1e2 plane this sends e1 to cos(angle) e1 + sin(angle) e2.
    """
    _check_sig(v, plane)
    _require_grade(v, 1, "rotated element")
    r = bivector_exp(plane, -angle / 2.0)
    return geometric_product(geometric_product(r, v), reverse(r))


class Rotor:
    """Unit even multivector acting by the two-sided sandwich product."""

    __slots__ = ("mv",)

    def __init__(self, mv: Multivector) -> None:
        odd = mv.coeffs[_grades(mv.sig) % 2 == 1]
        if odd.size and np.max(np.abs(odd)) > TOL_ALG * max(1.0, mv.max_abs()):
            raise ValueError("rotor must have even grades only")
        rr = geometric_product(mv, reverse(mv))
        if abs(rr.scalar_part() - 1.0) > 1e-9:
            raise ValueError(f"rotor must be unit: <R R~>_0 = {rr.scalar_part()}")
        rest = rr.coeffs.copy()
        rest[0] = 0.0
        if np.max(np.abs(rest)) > 1e-9:
            raise ValueError("R R~ must be scalar")
        object.__setattr__(self, "mv", mv)

    def __setattr__(self, name, value):
        raise AttributeError("Rotor is immutable")

    def apply(self, v: Multivector) -> Multivector:
        return geometric_product(geometric_product(self.mv, v), reverse(self.mv))

    def reversed(self) -> "Rotor":
        return Rotor(reverse(self.mv))

    def __mul__(self, other: "Rotor") -> "Rotor":
        return Rotor(geometric_product(self.mv, other.mv))

    def __repr__(self) -> str:
        return f"Rotor({self.mv!r})"


def rotor_from_plane(plane: Multivector, angle: float) -> Rotor:
    """Rotor exp(plane * angle); applying it sandwiches a rotation by 2*angle."""
    return Rotor(bivector_exp(plane, angle))


def orientation_sign(transform: Callable[[Multivector], Multivector], sig: Signature = CL3) -> int:
    """Determinant sign of a linear vector map via its action on the
    pseudoscalar: wedge the images of the basis vectors and read the sign."""
    images = []
    for k in range(1, sig.dim + 1):
        w = transform(Multivector.basis_vector(sig, k))
        _require_grade(w, 1, "transform image")
        images.append(w)
    wedge = images[0]
    for w in images[1:]:
        wedge = outer_product(wedge, w)
    coeff = float(wedge.coeffs[sig.size - 1])
    if abs(coeff) <= 1e-9:
        raise ValueError("degenerate transform: wedge of images vanishes")
    return 1 if coeff > 0 else -1
