import math

import numpy as np
import pytest

from dropletwave.quadrature import ball_quadrature
from dropletwave.special import bessel_half, bessel_root, spherical_harmonic


def bessel_series(nu: float, y: float, terms: int = 60) -> float:
    """Independent oracle: ascending power series for J_nu."""
    total = 0.0
    for k in range(terms):
        total += (-1.0) ** k * (y / 2.0) ** (2 * k + nu) / (
            math.factorial(k) * math.gamma(k + nu + 1.0)
        )
    return total


class TestBesselHalf:
    def test_closed_form_half(self):
        assert bessel_half(0.5, np.pi) == pytest.approx(0.0, abs=1e-14)

    def test_closed_form_minus_half(self):
        y = np.pi / 3
        want = np.sqrt(2.0 / (np.pi * y)) * np.cos(y)
        got = bessel_half(-0.5, y)
        assert got == pytest.approx(0.38985, abs=1e-5)
        assert got == pytest.approx(want, abs=1e-14)

    def test_recurrence_matches_series(self):
        for nu in (1.5, 2.5, 3.5):
            for y in (0.8, 2.0, 5.0, 11.0):
                assert bessel_half(nu, y) == pytest.approx(
                    bessel_series(nu, y), abs=1e-12
                )

    def test_recurrence_identity_at_five(self):
        y = 5.0
        want = bessel_half(0.5, y) / y - bessel_half(-0.5, y)
        assert bessel_half(1.5, y) == pytest.approx(want, abs=1e-14)

    def test_closed_forms_on_range(self):
        y = np.linspace(0.1, 50, 200)
        pref = np.sqrt(2.0 / (np.pi * y))
        assert np.allclose(bessel_half(0.5, y), pref * np.sin(y), atol=1e-13)
        assert np.allclose(bessel_half(-0.5, y), pref * np.cos(y), atol=1e-13)

    def test_rejects_nonpositive_argument(self):
        with pytest.raises(ValueError):
            bessel_half(0.5, 0.0)

    def test_rejects_non_half_integer(self):
        with pytest.raises(ValueError):
            bessel_half(1.0, 2.0)


class TestBesselRoot:
    def test_minus_half_roots(self):
        for j in range(1, 5):
            assert bessel_root(-0.5, j) == pytest.approx((j - 0.5) * np.pi, abs=1e-12)

    def test_plus_half_roots(self):
        for j in range(1, 5):
            assert bessel_root(0.5, j) == pytest.approx(j * np.pi, abs=1e-12)

    @pytest.mark.parametrize("nu", [-0.5, 0.5, 1.5])
    def test_residuals(self, nu):
        for j in range(1, 11):
            root = bessel_root(nu, j)
            assert abs(bessel_half(nu, root)) < 1e-10

    def test_increasing_and_interlacing(self):
        lower = [bessel_root(0.5, j) for j in range(1, 8)]
        upper = [bessel_root(1.5, j) for j in range(1, 8)]
        assert np.all(np.diff(lower) > 0)
        assert np.all(np.diff(upper) > 0)
        for j in range(6):
            assert lower[j] < upper[j] < lower[j + 1]

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError):
            bessel_root(0.5, 0)


class TestSphericalHarmonics:
    def test_constant_mode(self):
        assert spherical_harmonic(0, 0, 1.0, 2.0) == pytest.approx(
            0.2820947917738781, abs=1e-13
        )

    def test_y10_at_pole(self):
        assert spherical_harmonic(1, 0, 0.0, 0.0) == pytest.approx(
            0.4886025119029199, abs=1e-13
        )
        # closed form sqrt(3/4pi) cos(theta)
        th = 0.83
        assert spherical_harmonic(1, 0, th, 1.3) == pytest.approx(
            np.sqrt(3 / (4 * np.pi)) * np.cos(th), abs=1e-13
        )

    def test_unit_norm_y11(self):
        rule = ball_quadrature(2, 8)
        th = rule.theta_nodes[:, None] * np.ones(16)[None, :]
        ph = np.ones(8)[:, None] * rule.phi_nodes[None, :]
        val = rule.sphere_integral(spherical_harmonic(1, 1, th, ph) ** 2)
        assert val == pytest.approx(1.0, abs=1e-10)

    def test_orthonormality_up_to_degree_four(self):
        rule = ball_quadrature(2, 8)
        th = rule.theta_nodes[:, None] * np.ones(16)[None, :]
        ph = np.ones(8)[:, None] * rule.phi_nodes[None, :]
        pairs = [(l, m) for l in range(5) for m in range(-l, l + 1)]
        vals = {lm: spherical_harmonic(*lm, th, ph) for lm in pairs}
        for i, lm1 in enumerate(pairs):
            for lm2 in pairs[i:]:
                got = rule.sphere_integral(vals[lm1] * vals[lm2])
                want = 1.0 if lm1 == lm2 else 0.0
                assert got == pytest.approx(want, abs=1e-8), (lm1, lm2)

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            spherical_harmonic(1, 2, 0.0, 0.0)
