"""Per-process caches of the series and factorizations a sweep reuses across rows."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from toeplitz_delta.config import RunConfig
from toeplitz_delta.symbol import LaurentSeries, sample_coefficients
from toeplitz_delta.toeplitz_core import DeltaTerm
from toeplitz_delta.wiener_hopf import WienerHopfData, factorize


def _window(config: RunConfig) -> int:
    return max(config.n_stop + abs(config.nu) + 1, 8)


@lru_cache(maxsize=8)
def symbol_series(config: RunConfig) -> LaurentSeries:
    """Coefficients of f = a z^nu covering every rank in the sweep."""
    return sample_coefficients(config.build_symbol(), _window(config), **config.tolerances)


@lru_cache(maxsize=8)
def symbol_value(config: RunConfig) -> complex:
    """f(e^{i theta0})."""
    return complex(config.build_symbol()(np.exp(1j * config.theta0)))


@lru_cache(maxsize=8)
def factorization(config: RunConfig) -> WienerHopfData:
    """Wiener-Hopf data of a, resolved past the largest band index."""
    K = _window(config)
    a_series = sample_coefficients(config.factor_symbol(), K, **config.tolerances)
    return factorize(a_series, K, **config.tolerances)


def delta_term(config: RunConfig, n: int) -> DeltaTerm | None:
    z_n = config.z_n(n)
    if z_n == 0:
        return None
    return DeltaTerm(config.theta0, z_n, symbol_value(config))
