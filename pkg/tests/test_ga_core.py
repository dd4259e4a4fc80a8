"""Algebra kernel checks: hand tables for Cl(3) and Cl(1,3), algebraic
identities on random multivectors, reflection/rotation geometry."""
import math

import numpy as np
import pytest

from qsearch.ga_core import (
    CL3,
    CL13,
    Multivector,
    Rotor,
    Signature,
    TOL_ALG,
    allclose,
    bivector_exp,
    geometric_product,
    grade_project,
    inner_product,
    mirror,
    orientation_sign,
    outer_product,
    pseudoscalar,
    reflect,
    reverse,
    rotate,
    rotor_from_plane,
    scalar_product,
    vector_norm,
)

E1 = Multivector.basis_vector(CL3, 1)
E2 = Multivector.basis_vector(CL3, 2)
E3 = Multivector.basis_vector(CL3, 3)
E12 = Multivector.blade(CL3, 0b011)
I3 = pseudoscalar(CL3)


def random_mv(rng, sig=CL3):
    return Multivector(sig, rng.uniform(-1.0, 1.0, sig.size))


def random_unit_vector(rng, sig=CL3):
    v = rng.uniform(-1.0, 1.0, sig.dim)
    v /= np.linalg.norm(v)
    return Multivector.vector(sig, v)


class TestSignature:
    def test_validation(self):
        with pytest.raises(ValueError):
            Signature(-1, 0)
        with pytest.raises(ValueError):
            Signature(9, 8)
        assert Signature(3, 0).size == 8
        assert Signature(1, 3).metric() == (1, -1, -1, -1)


class TestGeometricProduct:
    def test_orthonormal_basis_anticommutes(self):
        assert allclose(geometric_product(E1, E2), E12)
        assert allclose(geometric_product(E2, E1), -E12)

    def test_basis_squares_to_one(self):
        assert allclose(geometric_product(E1, E1), Multivector.scalar(CL3, 1.0))

    def test_pseudoscalar_squares_to_minus_one(self):
        assert allclose(geometric_product(I3, I3), Multivector.scalar(CL3, -1.0))

    def test_spacetime_squares(self):
        g0 = Multivector.basis_vector(CL13, 1)
        g1 = Multivector.basis_vector(CL13, 2)
        assert geometric_product(g0, g0).scalar_part() == 1.0
        assert geometric_product(g1, g1).scalar_part() == -1.0
        # gamma_0 . gamma_i = 0
        assert inner_product(g0, g1).max_abs() == 0.0

    def test_signature_mismatch_rejected(self):
        with pytest.raises(ValueError):
            geometric_product(E1, Multivector.basis_vector(CL13, 1))

    def test_associativity_random(self):
        rng = np.random.default_rng(7)
        for sig in (CL3, CL13):
            for _ in range(50):
                a, b, c = (random_mv(rng, sig) for _ in range(3))
                lhs = geometric_product(geometric_product(a, b), c)
                rhs = geometric_product(a, geometric_product(b, c))
                assert allclose(lhs, rhs, tol=TOL_ALG * 100)

    def test_grade_support(self):
        # product of grade-r and grade-s lives on |r-s|, |r-s|+2, ..., r+s
        rng = np.random.default_rng(8)
        for _ in range(40):
            r = int(rng.integers(0, 4))
            s = int(rng.integers(0, 4))
            a = grade_project(random_mv(rng), r)
            b = grade_project(random_mv(rng), s)
            got = geometric_product(a, b).grades()
            wanted = set(range(abs(r - s), min(r + s, 3) + 1, 2))
            assert got <= wanted


class TestGradeProject:
    def test_picks_single_grade(self):
        m = Multivector.scalar(CL3, 1.0) + E1 + E12
        assert allclose(grade_project(m, 1), E1)

    def test_trivector_part_of_vector_product(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            x, y, z = (random_unit_vector(rng) for _ in range(3))
            xyz = geometric_product(geometric_product(x, y), z)
            assert allclose(
                grade_project(xyz, 3), outer_product(outer_product(x, y), z), tol=1e-10
            )

    def test_scalar_identity(self):
        s = Multivector.scalar(CL3, 2.5)
        assert allclose(grade_project(s, 0), s)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            grade_project(E1, 4)


class TestReverse:
    def test_bivector_flips(self):
        e23 = Multivector.blade(CL3, 0b110)
        assert allclose(reverse(e23), -e23)

    def test_low_grades_fixed(self):
        m = Multivector.scalar(CL3, 0.5) + E2
        assert allclose(reverse(m), m)

    def test_involution(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            a = random_mv(rng)
            assert allclose(reverse(reverse(a)), a)

    def test_pseudoscalar_reverse(self):
        assert allclose(reverse(I3), -I3)


class TestInnerOuter:
    def test_parallel_vectors(self):
        assert inner_product(E1, E1).scalar_part() == 1.0
        assert outer_product(E1, E1).max_abs() == 0.0

    def test_orthogonal_vectors(self):
        assert allclose(outer_product(E1, E2), E12)
        assert inner_product(E1, E2).max_abs() == 0.0

    def test_decomposition_identity(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            a = random_unit_vector(rng)
            b = random_unit_vector(rng)
            recombined = inner_product(a, b) + outer_product(a, b)
            assert allclose(recombined, geometric_product(a, b), tol=1e-12)


class TestReflect:
    def test_on_axis_fixed(self):
        assert allclose(reflect(E1, E1), E1)

    def test_perpendicular_flips(self):
        # e1 e2 e1 = -e2 by anticommutation
        assert allclose(reflect(E2, E1), -E2)

    def test_norm_preserved(self):
        rng = np.random.default_rng(12)
        for _ in range(30):
            v = Multivector.vector(CL3, rng.uniform(-2, 2, 3))
            a = random_unit_vector(rng)
            assert abs(vector_norm(reflect(v, a)) - vector_norm(v)) < TOL_ALG * 10

    def test_non_unit_axis_rejected(self):
        with pytest.raises(ValueError):
            reflect(E2, 2.0 * E1)


class TestRotate:
    def test_quarter_turn(self):
        assert allclose(rotate(E1, E12, math.pi / 2), E2, tol=1e-15)

    def test_axis_invariant(self):
        for theta in (0.3, 1.1, 2.9):
            assert allclose(rotate(E3, E12, theta), E3, tol=1e-15)

    def test_two_reflections_compose_to_rotation(self):
        # reflecting across lines opening theta/2 rotates by theta
        rng = np.random.default_rng(13)
        for _ in range(20):
            theta = rng.uniform(0, math.pi)
            v = Multivector.vector(CL3, rng.uniform(-1, 1, 3))
            a = E1
            b = math.cos(theta / 2) * E1 + math.sin(theta / 2) * E2
            doubled = reflect(reflect(v, a), b)
            assert allclose(doubled, rotate(v, E12, theta), tol=1e-12)

    def test_one_sided_form_in_plane(self):
        # exp[e2e1 theta] e1 equals the half-angle sandwich for in-plane vectors
        for theta in (0.0, 0.4, 1.3, 3.0):
            one_sided = geometric_product(
                bivector_exp(Multivector.blade(CL3, 0b011, -1.0), theta), E1
            )
            assert allclose(one_sided, rotate(E1, E12, theta), tol=1e-12)

    def test_norm_preserved(self):
        rng = np.random.default_rng(14)
        for _ in range(30):
            v = Multivector.vector(CL3, rng.uniform(-2, 2, 3))
            theta = rng.uniform(-6, 6)
            assert abs(vector_norm(rotate(v, E12, theta)) - vector_norm(v)) < 1e-12

    def test_non_unit_plane_rejected(self):
        with pytest.raises(ValueError):
            rotate(E1, 0.5 * E12, 1.0)


class TestRotor:
    def test_unit_constraint(self):
        r = rotor_from_plane(E12, 0.7)
        rr = geometric_product(r.mv, reverse(r.mv))
        assert abs(rr.scalar_part() - 1.0) < TOL_ALG

    def test_odd_parts_rejected(self):
        with pytest.raises(ValueError):
            Rotor(E1)

    def test_non_unit_rejected(self):
        with pytest.raises(ValueError):
            Rotor(Multivector.scalar(CL3, 2.0))


class TestPseudoscalar:
    def test_commutes_with_everything(self):
        rng = np.random.default_rng(15)
        for _ in range(20):
            m = random_mv(rng)
            assert allclose(geometric_product(I3, m), geometric_product(m, I3))


class TestOrientationSign:
    def test_identity(self):
        assert orientation_sign(lambda v: v) == 1

    def test_reflections_and_rotations_random(self):
        rng = np.random.default_rng(16)
        for _ in range(1000):
            n = random_unit_vector(rng)
            assert orientation_sign(lambda v, n=n: mirror(v, n)) == -1
        for _ in range(1000):
            theta = rng.uniform(0, 2 * math.pi)
            assert orientation_sign(lambda v, t=theta: rotate(v, E12, t)) == 1

    def test_line_reflection_is_proper_in_3d(self):
        # a v a fixes the axis and flips the perpendicular plane: det +1
        assert orientation_sign(lambda v: reflect(v, E1)) == 1

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            orientation_sign(lambda v: Multivector.vector(CL3, [0.0, 0.0, 0.0]))


class TestScalarHelpers:
    def test_scalar_product(self):
        assert scalar_product(E1, E1) == 1.0

    def test_vector_norm(self):
        v = Multivector.vector(CL3, [3.0, 4.0, 0.0])
        assert abs(vector_norm(v) - 5.0) < TOL_ALG
