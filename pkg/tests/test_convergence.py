"""End-to-end convergence of the large-n formulas against exact determinants."""

import math

import numpy as np
import pytest
from scipy.stats import linregress

from toeplitz_delta.asymptotics import (
    check_condition_decay,
    condition_ratio,
    default_rho,
    fit_decay_rate,
    theorem1,
    theorem2,
    x_at_theta0_asymptotic,
)
from toeplitz_delta.symbol import correlation_factor, magnetization_factor, sample_coefficients
from toeplitz_delta.toeplitz_core import (
    DeltaTerm,
    ToeplitzInstance,
    build_matrix,
    det_exact,
    solve_resolvent,
)
from toeplitz_delta.wiener_hopf import factorize_symbol
from toeplitz_delta.xy_chain import (
    ChainParams,
    correlation_exact,
    magnetization_asymptotic,
    magnetization_exact,
)


def _exact(symbol, n, theta0=0.0, z_n=0.0):
    f = sample_coefficients(symbol, K=max(n, 8))
    delta = DeltaTerm(theta0, z_n) if z_n else None
    return det_exact(build_matrix(ToeplitzInstance(n, f, delta))).value


def _rel(approx, exact):
    return abs(approx - exact) / abs(exact)


@pytest.mark.parametrize("lam", [0.2, 0.5, 0.8])
def test_szego_limit(lam):
    E = (1 - lam**2) ** 0.25
    for n in (20, 24, 28):
        exact = _exact(magnetization_factor(lam), n)
        assert abs(exact - E) <= max(5 * lam ** (2 * n) * E, 1e-12)


def test_zero_winding_error_decays_geometrically():
    lam = 0.5
    symbol = magnetization_factor(lam)
    wh = factorize_symbol(symbol, K_min=64)
    ns, errors = [], []
    for n in range(6, 31, 2):
        z_n = -2 / (2 * n + 1)
        error = _rel(theorem1(wh, 0.0, z_n, n).value, _exact(symbol, n, 0.0, z_n))
        # past the rounding floor the errors carry no rate information
        if error > 1e-11:
            ns.append(n)
            errors.append(error)
    assert len(ns) >= 3
    assert fit_decay_rate(ns, errors) <= 0.55


def _theorem2_errors(factor, nu, weight, Ns, rho):
    wh = factorize_symbol(factor, K_min=64)
    symbol = factor.times_power(nu)
    errors = {}
    for N in Ns:
        n = (N - 1) // 2
        approx = theorem2(wh, nu, 0.0, weight / N, n, rho=rho).value
        errors[N] = _rel(approx, _exact(symbol, n, 0.0, weight / N))
    return wh, errors


def test_winding_one_magnetization():
    rho = 0.55
    wh, errors = _theorem2_errors(magnetization_factor(0.5), 1, -2.0, range(13, 42, 2), rho)
    assert errors[13] <= 0.1
    for start in (13, 15):
        chain = [errors[N] for N in range(start, 42, 4)]
        assert all(b < a for a, b in zip(chain, chain[1:]))
    check_condition_decay({n: condition_ratio(wh, 1, n, 0.0, rho=rho) for n in range(6, 21)})


def test_winding_two_correlation():
    rho = 0.72
    wh, errors = _theorem2_errors(correlation_factor(0.5), 2, -1.0, range(13, 42, 2), rho)
    assert errors[13] <= 0.1
    for start in (13, 15):
        chain = [errors[N] for N in range(start, 42, 4)]
        assert all(b < a for a, b in zip(chain, chain[1:]))
    check_condition_decay({n: condition_ratio(wh, 2, n, 0.0, rho=rho) for n in range(6, 21)})


@pytest.mark.parametrize("alpha", ["x", "y"])
def test_ring_magnetization(alpha):
    for N in (13, 17, 21):
        params = ChainParams(lam=0.5, N=N, alpha=alpha)
        asym = magnetization_asymptotic(params)
        assert _rel(magnetization_exact(params), asym) <= 100 * 0.5 ** (N / 2)


def test_ring_correlation_falls_as_inverse_length():
    Ns = np.arange(13, 42, 2)
    values = [
        abs(correlation_exact(ChainParams(lam=0.5, N=int(N)), (int(N) - 1) // 2)) for N in Ns
    ]
    fit = linregress(np.log(Ns), np.log(values))
    assert fit.slope == pytest.approx(-1.0, abs=0.15)


@pytest.mark.parametrize("alpha", ["x", "y"])
def test_ring_magnetization_falls_as_inverse_length(alpha):
    Ns = np.arange(13, 42, 2)
    values = [abs(magnetization_exact(ChainParams(lam=0.5, N=int(N), alpha=alpha))) for N in Ns]
    fit = linregress(np.log(Ns), np.log(values))
    assert fit.slope == pytest.approx(-1.0, abs=0.1)


@pytest.mark.parametrize("nu", [0, 1])
def test_closed_form_resolvent_at_delta(nu):
    theta0 = 0.7
    factor = magnetization_factor(0.5)
    wh = factorize_symbol(factor, K_min=64)
    rho = default_rho(wh)
    t = np.exp(1j * theta0)
    for n in range(8, 25, 4):
        f = sample_coefficients(factor.times_power(nu), K=n + 1)
        exact = solve_resolvent(f, n, theta0).X_at(t)
        approx = x_at_theta0_asymptotic(wh, nu, theta0, n)
        assert abs(approx - exact) <= 10 * rho**n * abs(exact)
        assert math.isfinite(abs(approx))
