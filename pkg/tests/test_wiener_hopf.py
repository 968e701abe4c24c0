"""Tests for the Wiener-Hopf factorization and the plus/minus component calculus."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toeplitz_delta.errors import NonzeroWinding, ParameterError, ZeroOnCircle
from toeplitz_delta.symbol import (
    LaurentSeries,
    correlation_factor,
    magnetization_factor,
    product_symbol,
    sample_coefficients,
    series_from_samples,
    unit_circle,
)
from toeplitz_delta.wiener_hopf import (
    component_minus,
    component_plus,
    contour_component,
    difference_quotient,
    factorize,
    factorize_symbol,
    log_derivative_b,
    singular_minus,
    singular_minus_series,
    singular_plus,
    singular_plus_series,
)

# 32 points on the unit circle, offset from the grid of any delta position used below
POINTS = np.exp(1j * (2 * np.pi * (np.arange(32) + 0.37) / 32))

_root = st.builds(
    lambda r, phi: r * np.exp(1j * phi),
    st.floats(0.0, 0.6),
    st.floats(0.0, 2 * math.pi),
)
_factor = st.tuples(_root, st.floats(-1.0, 1.0))
random_symbols = st.builds(
    lambda inner, outer, scale: product_symbol(inner=inner, outer=outer, scale=scale),
    st.lists(_factor, min_size=1, max_size=3),
    st.lists(_factor, min_size=1, max_size=3),
    st.floats(0.5, 2.0),
)
delta_positions = st.floats(0.0, 2 * math.pi, exclude_max=True)

# 32 points in the annulus 0.9 <= |z| <= 1.1, none on the unit circle
ANNULUS_POINTS = (0.9 + 0.2 * np.arange(32) / 31) * POINTS


def _scaled_tol(series: LaurentSeries, rel: float) -> float:
    return rel * max(series.max_abs, 1.0)


class TestComponents:
    def test_decomposition(self):
        g = sample_coefficients(magnetization_factor(0.5))
        z = POINTS
        np.testing.assert_allclose(component_minus(g)(z) + component_plus(g)(z), g(z), atol=1e-13)

    def test_plus_keeps_zero_index(self):
        g = LaurentSeries.from_mapping({-1: 1.0, 0: 2.0, 1: 3.0})
        assert component_plus(g).coefficient(0) == 2.0
        assert component_minus(g).coefficient(0) == 0.0

    def test_contour_radius_checked(self):
        with pytest.raises(ParameterError, match="minus contour"):
            contour_component(lambda w: w, z=0.5, radius=0.8, side="minus")
        with pytest.raises(ParameterError, match="plus contour"):
            contour_component(lambda w: w, z=1.0, radius=0.9, theta0=0.0, side="plus")


class TestFactorize:
    def test_magnetization_factors(self):
        """a_+ = (1 - lam z)^{-1/2}, a_- = (1 - lam/z)^{1/2}."""
        lam = 0.5
        wh = factorize_symbol(magnetization_factor(lam))
        z = POINTS
        np.testing.assert_allclose(wh.a_plus(z), (1 - lam * z) ** -0.5, atol=1e-12)
        np.testing.assert_allclose(wh.a_minus(z), (1 - lam / z) ** 0.5, atol=1e-12)
        assert wh.log_a0 == pytest.approx(0.0, abs=1e-14)

    def test_constant_goes_to_plus(self):
        wh = factorize_symbol(magnetization_factor(0.5).scaled(3.0))
        assert wh.a_minus.coefficient(0) == 1.0
        assert wh.log_a0 == pytest.approx(math.log(3.0))
        assert wh.a_plus.coefficient(0) == pytest.approx(3.0)

    def test_b_and_c(self):
        wh = factorize_symbol(magnetization_factor(0.3))
        z = POINTS
        np.testing.assert_allclose(wh.b(z), wh.a_minus(z) / wh.a_plus(z), atol=1e-12)
        np.testing.assert_allclose(wh.c(z) * wh.b(z), 1.0, atol=1e-12)
        np.testing.assert_allclose(wh.a_plus(z) * wh.a_plus_inv(z), 1.0, atol=1e-12)
        np.testing.assert_allclose(wh.a_minus(z) * wh.a_minus_inv(z), 1.0, atol=1e-12)

    def test_K_min_respected(self):
        wh = factorize_symbol(magnetization_factor(0.5), K_min=100)
        assert wh.K >= 100

    def test_nonzero_winding_rejected(self):
        series = sample_coefficients(magnetization_factor(0.5).times_power(1))
        with pytest.raises(NonzeroWinding):
            factorize(series)

    def test_zero_on_circle(self):
        series = LaurentSeries.from_mapping({0: 1.0, 1: -1.0})
        with pytest.raises(ZeroOnCircle):
            factorize(series)

    @pytest.mark.parametrize("lam", [0.2, 0.5, 0.8])
    def test_closed_forms(self, lam):
        """a_+ = (1 - lam z)^{-1/2} (magnetization) and (1 - lam z^2)^{-1/2} (correlation)."""
        z = unit_circle(64)
        magnetization = factorize_symbol(magnetization_factor(lam))
        correlation = factorize_symbol(correlation_factor(lam))
        np.testing.assert_allclose(magnetization.a_plus(z), (1 - lam * z) ** -0.5, rtol=1e-9)
        np.testing.assert_allclose(correlation.a_plus(z), (1 - lam * z**2) ** -0.5, rtol=1e-9)

    @settings(max_examples=10, deadline=None)
    @given(random_symbols)
    def test_refactoring_the_product(self, symbol):
        wh = factorize_symbol(symbol)
        product = series_from_samples(
            lambda M: wh.a_minus.on_grid(M) * wh.a_plus.on_grid(M), wh.K
        )
        again = factorize(product, K_min=wh.K)
        j = np.arange(-wh.K, wh.K + 1)
        for old, new in ((wh.a_plus, again.a_plus), (wh.a_minus, again.a_minus)):
            np.testing.assert_allclose(
                new.coefficients(j), old.coefficients(j), atol=_scaled_tol(old, 1e-9)
            )

    @settings(max_examples=10, deadline=None)
    @given(random_symbols)
    def test_factorization_identity(self, symbol):
        wh = factorize_symbol(symbol)
        z = POINTS
        a = symbol(z)
        np.testing.assert_allclose(wh.a_minus(z) * wh.a_plus(z), a, rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(wh.a_minus.coefficients(range(1, wh.a_minus.K + 1)), 0)
        np.testing.assert_allclose(wh.a_plus.coefficients(range(-wh.a_plus.K, 0)), 0)


class TestSingularComponents:
    def test_sum_is_difference_quotient(self):
        g = sample_coefficients(magnetization_factor(0.5))
        theta0 = 0.9
        z = POINTS
        total = singular_minus(g, theta0)(z) + singular_plus(g, theta0)(z)
        np.testing.assert_allclose(total, difference_quotient(g, theta0, z), atol=1e-10)

    @settings(max_examples=10, deadline=None)
    @given(random_symbols, delta_positions)
    def test_quotients_off_the_circle(self, symbol, theta0):
        """Singular components equal the difference quotients of [g]_- and [g]_+."""
        g = sample_coefficients(symbol)
        t = np.exp(1j * theta0)
        z = ANNULUS_POINTS
        tol = _scaled_tol(g, 1e-9)
        pairs = ((component_minus, singular_minus), (component_plus, singular_plus))
        for component, singular in pairs:
            side = component(g)
            quotient = (side(z) - side(t)) / (z - t)
            np.testing.assert_allclose(singular(g, theta0)(z), quotient, atol=tol)

    def test_difference_quotient_near_t(self):
        g = sample_coefficients(magnetization_factor(0.5))
        t = np.exp(0.4j)
        assert difference_quotient(g, 0.4, t) == pytest.approx(g.derivative_at(t))
        assert difference_quotient(g, 0.4, t * np.exp(1e-4j)) == pytest.approx(
            g.derivative_at(t), rel=1e-3
        )

    @settings(max_examples=10, deadline=None)
    @given(random_symbols, delta_positions)
    def test_minus_matches_contour(self, symbol, theta0):
        g = sample_coefficients(symbol)
        h = singular_minus(g, theta0)
        tol = _scaled_tol(g, 1e-9)
        for z in POINTS:
            expected = contour_component(symbol, z, radius=0.8, theta0=theta0, side="minus")
            assert abs(h(z) - expected) <= tol

    @settings(max_examples=10, deadline=None)
    @given(random_symbols, delta_positions)
    def test_plus_matches_contour(self, symbol, theta0):
        g = sample_coefficients(symbol)
        h = singular_plus(g, theta0)
        tol = _scaled_tol(g, 1e-9)
        for z in POINTS:
            expected = contour_component(symbol, z, radius=1.25, theta0=theta0, side="plus")
            assert abs(h(z) - expected) <= tol

    @settings(max_examples=10, deadline=None)
    @given(random_symbols, delta_positions)
    def test_series_forms_converge(self, symbol, theta0):
        g = sample_coefficients(symbol)
        tol = _scaled_tol(g, 1e-12)
        np.testing.assert_allclose(
            singular_minus_series(g, theta0, g.K).coeffs, singular_minus(g, theta0).coeffs, atol=tol
        )
        np.testing.assert_allclose(
            singular_plus_series(g, theta0, g.K).coeffs, singular_plus(g, theta0).coeffs, atol=tol
        )

    def test_plain_components_match_contour(self):
        symbol = magnetization_factor(0.5)
        g = sample_coefficients(symbol)
        z = 1.0 * np.exp(0.3j)
        minus = contour_component(symbol, z, radius=0.8, side="minus")
        plus = contour_component(symbol, z, radius=1.25, side="plus")
        assert component_minus(g)(z) == pytest.approx(minus, abs=1e-11)
        assert component_plus(g)(z) == pytest.approx(plus, abs=1e-11)


class TestLogDerivative:
    def test_magnetization_at_one(self):
        """t (log c)'(t) with c = a_+/a_- = (1 - lam z)^{-1/2} (1 - lam/z)^{-1/2}."""
        lam = 0.5
        wh = factorize_symbol(magnetization_factor(lam))
        expected = 0.5 * lam / (1 - lam) - 0.5 * lam / (1 - lam)
        assert log_derivative_b(wh, 0.0) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("theta0", [0.0, 0.7, 2.5])
    def test_against_closed_form(self, theta0):
        lam = 0.4
        wh = factorize_symbol(magnetization_factor(lam))
        t = np.exp(1j * theta0)
        # t d/dt log c(t)
        expected = 0.5 * lam * t / (1 - lam * t) - 0.5 * (lam / t) / (1 - lam / t)
        assert log_derivative_b(wh, theta0) == pytest.approx(expected, abs=1e-12)

    def test_unit_circle_helper(self):
        assert unit_circle(4)[1] == pytest.approx(1j)
