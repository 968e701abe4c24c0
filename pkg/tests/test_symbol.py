"""Tests for Laurent series, symbol families, winding numbers and decay rates."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import binom

from toeplitz_delta.errors import (
    EvaluationError,
    NonIntegerWinding,
    ParameterError,
    UnresolvedSeries,
    ZeroOnCircle,
)
from toeplitz_delta.symbol import (
    AnnularSymbol,
    DeltaSymbol,
    LaurentSeries,
    constant_symbol,
    correlation_factor,
    decay_rate,
    grid_size,
    magnetization_factor,
    product_symbol,
    sample_coefficients,
    transpose_symbol,
    unit_circle,
    winding_number,
)


_root = st.builds(
    lambda r, phi: r * np.exp(1j * phi),
    st.floats(0.0, 0.6),
    st.floats(0.0, 2 * math.pi),
)
_factor = st.tuples(_root, st.floats(-1.0, 1.0))
wound_symbols = st.builds(
    lambda inner, outer, nu: product_symbol(inner=inner, outer=outer, nu=nu),
    st.lists(_factor, max_size=3),
    st.lists(_factor, max_size=3),
    st.integers(-3, 3),
)

ROUND_TRIP_SYMBOLS = [
    magnetization_factor(0.5),
    correlation_factor(0.8),
    magnetization_factor(0.3).times_power(2),
    product_symbol(inner=[(0.4, 0.5), (-0.3j, -1.0)], outer=[(0.5, 0.7)], scale=1.5),
]

class TestLaurentSeries:
    def test_from_mapping(self):
        g = LaurentSeries.from_mapping({-2: 1.0, 3: 2j})
        assert g.K == 3
        assert g.coefficient(-2) == 1.0
        assert g.coefficient(3) == 2j
        assert g.coefficient(7) == 0

    def test_even_length_rejected(self):
        with pytest.raises(ValueError, match="odd length"):
            LaurentSeries(np.zeros(4))

    def test_evaluation_both_sides(self):
        g = LaurentSeries.from_mapping({-1: 2.0, 0: 1.0, 2: 0.5})
        z = 0.7 * np.exp(0.4j)
        assert g(z) == pytest.approx(2 / z + 1 + 0.5 * z**2)

    def test_coefficients_zero_padded(self):
        g = LaurentSeries.from_mapping({0: 1.0, 1: 2.0})
        np.testing.assert_array_equal(g.coefficients([-5, 0, 1, 5]), [0, 1, 2, 0])

    def test_restricted(self):
        g = LaurentSeries.from_mapping({-1: 1.0, 0: 2.0, 1: 3.0})
        assert g.restricted(hi=-1)(1.0) == pytest.approx(1.0)
        assert g.restricted(lo=0)(1.0) == pytest.approx(5.0)

    def test_on_grid_matches_evaluation(self):
        g = LaurentSeries.from_mapping({-3: 0.2, 0: 1.0, 2: -0.4j})
        np.testing.assert_allclose(g.on_grid(16), g(unit_circle(16)), atol=1e-14)

    def test_derivative(self):
        g = LaurentSeries.from_mapping({-1: 1.0, 2: 1.0})
        z = 1.3
        assert g.derivative_at(z) == pytest.approx(-1 / z**2 + 2 * z)

    def test_add_pads(self):
        total = LaurentSeries.from_mapping({0: 1.0}) + LaurentSeries.from_mapping({4: 1.0})
        assert total.K == 4
        assert total.coefficient(0) == 1.0
        assert total.coefficient(4) == 1.0


class TestSymbols:
    def test_radii_validated(self):
        with pytest.raises(ParameterError, match="rho_minus < 1 < rho_plus"):
            AnnularSymbol(eval=lambda z: z, rho_minus=1.2)

    def test_lambda_range(self):
        with pytest.raises(ParameterError, match="lambda"):
            magnetization_factor(1.0)

    def test_magnetization_at_one(self):
        assert magnetization_factor(0.5)(1.0) == pytest.approx(1.0)

    def test_correlation_is_even(self):
        a = correlation_factor(0.5)
        z = np.exp(0.3j)
        assert a(z) == pytest.approx(a(-z))

    def test_product_root_inside(self):
        with pytest.raises(ParameterError, match="must be < 1"):
            product_symbol(inner=[(1.1, 1.0)])

    def test_times_power(self):
        f = magnetization_factor(0.4).times_power(2)
        z = np.exp(1.1j)
        assert f.nu == 2
        assert f(z) == pytest.approx(z**2 * magnetization_factor(0.4)(z))

    def test_transpose(self):
        f = product_symbol(inner=[(0.3, 1.0)], nu=1)
        ft = transpose_symbol(f)
        z = 0.9 * np.exp(0.5j)
        assert ft.nu == -1
        assert ft(z) == pytest.approx(f(1 / z))

    def test_delta_symbol(self):
        d = DeltaSymbol(magnetization_factor(0.5), theta0=0.0, weight=lambda n: -2 / (2 * n + 1))
        assert d.z_n(10) == pytest.approx(-2 / 21)
        assert d.symbol_value == pytest.approx(1.0)

    def test_delta_symbol_theta0_range(self):
        with pytest.raises(ParameterError, match="theta0"):
            DeltaSymbol(constant_symbol(), theta0=7.0, weight=lambda n: 0.0)


class TestSampleCoefficients:
    def test_grid_size(self):
        assert grid_size(1) == 256
        assert grid_size(100) == 1024

    def test_binomial_coefficients(self):
        """(1 - p z)^e has coefficients binom(e, j) (-p)^j."""
        p, e = 0.4, 0.5
        g = sample_coefficients(product_symbol(inner=[(p, e)]))
        j = np.arange(0, 12)
        np.testing.assert_allclose(g.coefficients(j), binom(e, j) * (-p) ** j, atol=1e-14)
        np.testing.assert_allclose(g.coefficients(-j[1:]), 0, atol=1e-14)

    def test_magnetization_first_coefficients(self):
        lam = 0.5
        g = sample_coefficients(magnetization_factor(lam))
        # a = (1 - lam/z)^{1/2} (1 - lam z)^{-1/2}
        direct = sum(
            binom(0.5, k) * (-lam) ** k * binom(-0.5, k + 1) * (-lam) ** (k + 1)
            for k in range(60)
        )
        assert g.coefficient(1) == pytest.approx(direct, abs=1e-13)

    def test_tail_resolved(self):
        g = sample_coefficients(magnetization_factor(0.8))
        assert g.tail_bound <= 1e-13 * g.max_abs
        assert g.K >= 64

    def test_K_is_lower_bound(self):
        g = sample_coefficients(constant_symbol(2.0), K=40)
        assert g.K == 40
        assert g.coefficient(0) == pytest.approx(2.0)

    def test_unresolved_at_cap(self):
        with pytest.raises(UnresolvedSeries, match="cap"):
            sample_coefficients(magnetization_factor(0.95), K=8, max_K=32)

    @pytest.mark.parametrize("symbol", ROUND_TRIP_SYMBOLS)
    def test_round_trip(self, symbol):
        g = sample_coefficients(symbol)
        z = np.exp(2j * np.pi * np.random.default_rng(64).random(64))
        np.testing.assert_allclose(g(z), symbol(z), rtol=1e-10)

    def test_odd_correlation_coefficients_vanish(self):
        lam = 0.5
        g = sample_coefficients(correlation_factor(lam))
        c = sample_coefficients(lambda z: ((1 - lam * z**2) * (1 - lam / z**2)) ** -0.5)
        for series in (g, c):
            j = np.arange(-series.K, series.K + 1)
            assert np.max(np.abs(series.coefficients(j[j % 2 == 1]))) < 1e-14

    def test_non_finite(self):
        bad = AnnularSymbol(eval=lambda z: np.where(np.real(z) > 0.999, np.nan, 1.0))
        with pytest.raises(EvaluationError):
            sample_coefficients(bad)

    def test_invalid_K(self):
        with pytest.raises(ParameterError):
            sample_coefficients(constant_symbol(), K=0)


class TestWindingNumber:
    @pytest.mark.parametrize("nu", [-2, -1, 0, 1, 3])
    def test_power_times_factor(self, nu):
        assert winding_number(magnetization_factor(0.5).times_power(nu)) == nu

    def test_zero_on_circle(self):
        with pytest.raises(ZeroOnCircle):
            winding_number(lambda z: 1 - z)

    def test_coarse_grid(self):
        # z^2 on three points turns by a third of a circle per step
        with pytest.raises(NonIntegerWinding, match="too coarse"):
            winding_number(lambda z: z**2, M=3)

    @settings(max_examples=10, deadline=None)
    @given(wound_symbols, wound_symbols)
    def test_additive_over_products(self, f, g):
        nu = winding_number(lambda z: f(z) * g(z))
        assert nu == winding_number(f) + winding_number(g)
        assert nu == f.nu + g.nu

    def test_non_integer(self):
        # z^{1/2} on the principal branch jumps at z = -1
        with pytest.raises(NonIntegerWinding):
            winding_number(lambda z: np.sqrt(z))


class TestDecayRate:
    def test_geometric(self):
        j = np.arange(-40, 41)
        g = LaurentSeries(np.where(j >= 0, 0.5 ** np.abs(j), 0.3 ** np.abs(j)))
        rho_minus, rho_plus = decay_rate(g)
        assert rho_minus == pytest.approx(0.3, rel=1e-6)
        assert rho_plus == pytest.approx(0.5, rel=1e-6)

    def test_magnetization_rate(self):
        rho_minus, rho_plus = decay_rate(sample_coefficients(magnetization_factor(0.5)))
        # algebraic prefactors pull the fitted rate slightly below lambda
        assert 0.42 < rho_minus < 0.52
        assert 0.42 < rho_plus < 0.52

    def test_correlation_rate(self):
        """Branch points at z^2 = lam^{+-1} give a rate of sqrt(lam) per index."""
        rho_minus, rho_plus = decay_rate(sample_coefficients(correlation_factor(0.5)))
        assert rho_minus == pytest.approx(math.sqrt(0.5), rel=0.1)
        assert rho_plus == pytest.approx(math.sqrt(0.5), rel=0.1)

    @pytest.mark.parametrize("factor", [4.0, -0.5, 2j])
    def test_scale_invariant(self, factor):
        symbol = magnetization_factor(0.5)
        rates = decay_rate(sample_coefficients(symbol))
        scaled = decay_rate(sample_coefficients(symbol.scaled(factor)))
        assert scaled == pytest.approx(rates, abs=1e-6)

    def test_one_sided_reports_zero(self, caplog):
        g = LaurentSeries.from_mapping({j: 0.5**j for j in range(30)})
        with caplog.at_level("WARNING"):
            rho_minus, rho_plus = decay_rate(g)
        assert rho_minus == 0.0
        assert rho_plus == pytest.approx(0.5, rel=1e-6)
        assert "minus side" in caplog.text

    def test_unit_circle_points(self):
        z = unit_circle(8)
        assert z[2] == pytest.approx(1j)
        assert np.all(np.abs(np.abs(z) - 1) < 1e-15)
        assert math.isclose(z[0].real, 1.0)
