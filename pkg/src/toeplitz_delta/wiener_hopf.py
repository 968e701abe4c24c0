"""Wiener-Hopf factorization a = a_minus * a_plus and the component calculus.

For a Laurent series g, [g]_- keeps the indices j <= -1 and [g]_+ keeps j >= 0.
The singular components of g / (z - t), t = e^{i theta0}, are obtained by exact
synthetic division of [g]_- and [g]_+ by (z - t).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from toeplitz_delta.errors import (
    EvaluationError,
    NonzeroWinding,
    ParameterError,
    UnresolvedSeries,
    ZeroOnCircle,
)
from toeplitz_delta.symbol import (
    MAX_K,
    QUADRATURE_TOLERANCE,
    TAIL_TOLERANCE,
    AnnularSymbol,
    LaurentSeries,
    sample_coefficients,
    series_from_samples,
)

logger = logging.getLogger(__name__)

NEAR_SINGULAR = 1e-6
_ZERO_FLOOR = 1e-14
_MAX_PHASE_STEP = math.pi / 2


@dataclass(frozen=True)
class WienerHopfData:
    """Series of log a and of the Wiener-Hopf factors, with b = a_-/a_+ and c = a_+/a_-."""

    log_a: LaurentSeries
    a_plus: LaurentSeries
    a_minus: LaurentSeries
    b: LaurentSeries
    c: LaurentSeries
    a_plus_inv: LaurentSeries
    a_minus_inv: LaurentSeries

    @property
    def log_a0(self) -> complex:
        """(log a)_0, carried by a_plus."""
        return self.log_a.coefficient(0)

    @property
    def K(self) -> int:
        """Smallest coefficient window among the factor series."""
        return min(s.K for s in (self.a_plus, self.a_minus, self.b, self.c))


def component_minus(g: LaurentSeries) -> LaurentSeries:
    """[g]_-: the indices j <= -1."""
    return g.restricted(hi=-1)


def component_plus(g: LaurentSeries) -> LaurentSeries:
    """[g]_+: the indices j >= 0."""
    return g.restricted(lo=0)


# -- Factorization --------------------------------------------------------------


def _continuous_log(values: np.ndarray) -> np.ndarray:
    """Logarithm with continuous phase along a closed grid loop.

    Raises:
        ZeroOnCircle: If a sample sits at the zero floor.
        NonzeroWinding: If the phase does not return to its start.
        UnresolvedSeries: If adjacent phase steps are too large to follow.
    """
    modulus = np.abs(values)
    if modulus.max() == 0.0 or modulus.min() <= _ZERO_FLOOR * modulus.max():
        raise ZeroOnCircle(f"a vanishes on the unit circle (min |a| = {modulus.min():.3g})")

    steps = np.angle(np.roll(values, -1) / values)
    if np.max(np.abs(steps)) >= _MAX_PHASE_STEP:
        raise UnresolvedSeries(
            f"phase step {np.max(np.abs(steps)):.3f} on a {values.size}-point grid is too coarse"
        )
    closing = float(steps.sum())
    if abs(closing) >= math.pi:
        raise NonzeroWinding(f"phase increases by {closing:.4f} around the circle; a must wind 0")

    phase = np.unwrap(np.angle(values))
    phase -= 2 * math.pi * round(float(phase.mean()) / (2 * math.pi))
    return np.log(modulus) + 1j * phase


def _exp_series(exponent: LaurentSeries, K: int, **tolerances) -> LaurentSeries:
    return series_from_samples(lambda M: np.exp(exponent.on_grid(M)), K, **tolerances)


def factorize(
    a_series: LaurentSeries,
    K_min: int = 16,
    *,
    tail_tolerance: float = TAIL_TOLERANCE,
    quadrature_tolerance: float = QUADRATURE_TOLERANCE,
    max_K: int = MAX_K,
) -> WienerHopfData:
    """Factor a zero-winding symbol as a = a_- a_+ with (a_-)_0 = 1.

    Args:
        a_series: Resolved Laurent coefficients of a.
        K_min: Smallest coefficient window for every returned series.

    Returns:
        WienerHopfData holding log a, a_plus, a_minus, b, c and the factor inverses.

    Raises:
        ZeroOnCircle: If a vanishes on the sampling grid.
        NonzeroWinding: If a winds around the origin.
    """
    tolerances = dict(
        tail_tolerance=tail_tolerance,
        quadrature_tolerance=quadrature_tolerance,
        max_K=max_K,
    )
    K = max(int(K_min), a_series.K, 1)

    def log_samples(M: int) -> np.ndarray:
        values = a_series.on_grid(M)
        if not np.all(np.isfinite(values)):
            raise EvaluationError(f"non-finite values of a on the {M}-point grid")
        return _continuous_log(values)

    log_a = series_from_samples(log_samples, K, **tolerances).padded(K)
    log_plus = component_plus(log_a)
    log_minus = component_minus(log_a)
    logger.debug("factorize: log a resolved with K=%d, (log a)_0=%s", log_a.K, log_a.coefficient(0))

    a_plus = component_plus(_exp_series(log_plus, K, **tolerances))
    a_plus_inv = component_plus(_exp_series(log_plus.scaled(-1), K, **tolerances))
    a_minus = _unit_minus(_exp_series(log_minus, K, **tolerances))
    a_minus_inv = _unit_minus(_exp_series(log_minus.scaled(-1), K, **tolerances))
    b = _exp_series(log_minus + log_plus.scaled(-1), K, **tolerances)
    c = _exp_series(log_plus + log_minus.scaled(-1), K, **tolerances)

    return WienerHopfData(
        log_a=log_a,
        a_plus=a_plus,
        a_minus=a_minus,
        b=b,
        c=c,
        a_plus_inv=a_plus_inv,
        a_minus_inv=a_minus_inv,
    )


def _unit_minus(series: LaurentSeries) -> LaurentSeries:
    """Project onto indices <= 0 and pin the index-0 coefficient to 1."""
    coeffs = series.restricted(hi=0).coeffs.copy()
    coeffs[series.K] = 1.0
    return LaurentSeries(coeffs, series.tail_bound)


def factorize_symbol(symbol: AnnularSymbol, K_min: int = 16, **tolerances) -> WienerHopfData:
    """Sample a zero-winding symbol and factor it."""
    return factorize(sample_coefficients(symbol, K_min, **tolerances), K_min, **tolerances)


# -- Singular components --------------------------------------------------------


def singular_minus(g: LaurentSeries, theta0: float) -> LaurentSeries:
    """[g/(z - t)]_-^{(<)} = ([g]_-(z) - [g]_-(t)) / (z - t), t = e^{i theta0}.

    Coefficients follow h_{-p} = (h_{-p-1} - g_{-p}) / t with h_{-K-1} = 0.
    """
    t = np.exp(1j * theta0)
    K = g.K
    out = np.zeros(2 * K + 1, dtype=complex)
    h = 0j
    for p in range(K, 0, -1):
        h = (h - g.coeffs[K - p]) / t
        out[K - p] = h
    return LaurentSeries(out, g.tail_bound * K)


def singular_plus(g: LaurentSeries, theta0: float) -> LaurentSeries:
    """[g/(z - t)]_+^{(>)} = ([g]_+(z) - [g]_+(t)) / (z - t), t = e^{i theta0}.

    Coefficients follow h_p = g_{p+1} + t h_{p+1} with h_K = 0.
    """
    t = np.exp(1j * theta0)
    K = g.K
    out = np.zeros(2 * K + 1, dtype=complex)
    h = 0j
    for p in range(K - 1, -1, -1):
        h = g.coeffs[K + p + 1] + t * h
        out[K + p] = h
    return LaurentSeries(out, g.tail_bound * K)


def difference_quotient(g: LaurentSeries, theta0: float, z):
    """(g(z) - g(t)) / (z - t), switching to g'(z) for |z - t| < 1e-6."""
    t = np.exp(1j * theta0)
    z = np.asarray(z, dtype=complex)
    gap = z - t
    near = np.abs(gap) < NEAR_SINGULAR
    safe_gap = np.where(near, 1.0, gap)
    values = np.where(near, g.derivative_at(z), (g(z) - g(t)) / safe_gap)
    if values.ndim == 0:
        return complex(values)
    return values


def singular_minus_series(g: LaurentSeries, theta0: float, J: int) -> LaurentSeries:
    """Partial sum -sum_{j=0}^{J} t^{-(j+1)} [g z^j]_-, converging to singular_minus."""
    t = np.exp(1j * theta0)
    K = g.K
    idx = g.indices
    total = np.zeros(2 * K + 1, dtype=complex)
    for j in range(J + 1):
        shifted = g.coefficients(idx - j)
        total -= t ** (-(j + 1)) * np.where(idx <= -1, shifted, 0)
    return LaurentSeries(total)


def singular_plus_series(g: LaurentSeries, theta0: float, J: int) -> LaurentSeries:
    """Partial sum sum_{j=0}^{J} t^j [g z^{-j-1}]_+, converging to singular_plus."""
    t = np.exp(1j * theta0)
    K = g.K
    idx = g.indices
    total = np.zeros(2 * K + 1, dtype=complex)
    for j in range(J + 1):
        shifted = g.coefficients(idx + j + 1)
        total += t**j * np.where(idx >= 0, shifted, 0)
    return LaurentSeries(total)


def contour_component(
    g_eval: Callable[[np.ndarray], np.ndarray],
    z: complex,
    radius: float,
    theta0: float | None = None,
    side: Literal["minus", "plus"] = "minus",
    M: int = 2048,
) -> complex:
    """Trapezoid evaluation of the Cauchy-integral form of a component.

    side="minus" integrates g(w) / (z - w) on |w| = radius < |z|; side="plus"
    integrates g(w) / (w - z) on |w| = radius > |z|. With theta0 the integrand
    also carries 1 / (w - e^{i theta0}), giving the singular components.

    Raises:
        ParameterError: If the circle is on the wrong side of z or of |w| = 1.
    """
    if side == "minus" and not radius < min(abs(z), 1.0 if theta0 is not None else math.inf):
        raise ParameterError(f"minus contour radius {radius} must be below |z| = {abs(z):.3g}")
    if side == "plus" and not radius > max(abs(z), 1.0 if theta0 is not None else 0.0):
        raise ParameterError(f"plus contour radius {radius} must exceed |z| = {abs(z):.3g}")
    if side not in ("minus", "plus"):
        raise ParameterError(f"side must be 'minus' or 'plus', got {side!r}")

    w = radius * np.exp(2j * np.pi * np.arange(M) / M)
    integrand = np.asarray(g_eval(w), dtype=complex)
    integrand = integrand / (z - w) if side == "minus" else integrand / (w - z)
    if theta0 is not None:
        integrand = integrand / (w - np.exp(1j * theta0))
    return complex(np.mean(integrand * w))


def log_derivative_b(wh: WienerHopfData, theta0: float) -> complex:
    """i d/d theta log b(e^{i theta}) at theta0.

    With (log b)_k = (log a)_k for k < 0 and -(log a)_k for k >= 0 this is
    -sum_k k (log b)_k e^{i k theta0}.
    """
    k = wh.log_a.indices
    log_b = np.where(k < 0, wh.log_a.coeffs, -wh.log_a.coeffs)
    return complex(-np.sum(k * log_b * np.exp(1j * k * theta0)))
