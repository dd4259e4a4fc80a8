"""Direct checks of the in-repo Bessel functions; the deeper validation is
the ODE-residual loop in the damped-geodesic tests."""
import math

import numpy as np
import pytest

from qsearch import bessel


class TestJ1:
    def test_zero(self):
        assert bessel.j1(0.0) == 0.0

    def test_small_argument_law(self):
        for z in (1e-5, 1e-3, 0.05):
            assert abs(bessel.j1(z) - z / 2.0) < z**3

    def test_odd_symmetry(self):
        for z in (0.3, 2.0, 15.0):
            assert bessel.j1(-z) == -bessel.j1(z)

    def test_series_asymptotic_seam(self):
        # values on both sides of the z = 12 switch must agree smoothly
        left = bessel.j1(12.0 - 1e-9)
        right = bessel.j1(12.0 + 1e-9)
        assert abs(left - right) < 1e-9

    def test_bessel_ode_directly(self):
        # w'' + w'/z + (1 - 1/z^2) w = 0, derivatives by central difference;
        # the probe step balances truncation against function roundoff
        h = 1e-3
        for z in np.linspace(0.5, 40.0, 200):
            z = float(z)
            wm, w0, wp = bessel.j1(z - h), bessel.j1(z), bessel.j1(z + h)
            d1 = (wp - wm) / (2 * h)
            d2 = (wp - 2 * w0 + wm) / (h * h)
            resid = d2 + d1 / z + (1.0 - 1.0 / (z * z)) * w0
            assert abs(resid) < 1e-5


class TestY1:
    def test_domain(self):
        with pytest.raises(ValueError):
            bessel.y1(0.0)
        with pytest.raises(ValueError):
            bessel.y1(-1.0)

    def test_small_argument_divergence(self):
        # leading behavior -2/(pi z)
        for z in (1e-6, 1e-4):
            want = -2.0 / (math.pi * z)
            assert abs(bessel.y1(z) / want - 1.0) < 1e-3

    def test_bessel_ode_directly(self):
        # the singular end is covered by the divergence test; higher
        # derivatives below z ~ 1 defeat the finite-difference probe
        h = 1e-3
        for z in np.linspace(1.0, 40.0, 200):
            z = float(z)
            wm, w0, wp = bessel.y1(z - h), bessel.y1(z), bessel.y1(z + h)
            d1 = (wp - wm) / (2 * h)
            d2 = (wp - 2 * w0 + wm) / (h * h)
            resid = d2 + d1 / z + (1.0 - 1.0 / (z * z)) * w0
            assert abs(resid) < 1e-5

    def test_seam(self):
        assert abs(bessel.y1(12.0 - 1e-9) - bessel.y1(12.0 + 1e-9)) < 1e-9
