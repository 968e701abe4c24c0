"""Annular symbols, their Laurent coefficients, winding numbers and decay rates.

Coefficients are sampled with the equispaced trapezoid rule on the unit circle,
which is spectrally accurate for functions analytic on an annulus around |z| = 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.stats import linregress

from toeplitz_delta.errors import (
    EvaluationError,
    InsufficientData,
    NonIntegerWinding,
    ParameterError,
    UnresolvedSeries,
    ZeroOnCircle,
)

logger = logging.getLogger(__name__)

TAIL_TOLERANCE = 1e-13
QUADRATURE_TOLERANCE = 1e-10
MAX_K = 2**14
MIN_GRID = 256
WINDING_SLACK = 0.1
_ZERO_FLOOR = 1e-14
_MAX_PHASE_STEP = math.pi / 2
_MIN_FIT_POINTS = 5

SymbolFunction = Callable[[np.ndarray], np.ndarray]
GridSampler = Callable[[int], np.ndarray]


def grid_size(K: int) -> int:
    """Smallest power of two >= max(8K, 256)."""
    target = max(8 * int(K), MIN_GRID)
    return 1 << (target - 1).bit_length()


def unit_circle(M: int) -> np.ndarray:
    """The M-point equispaced grid e^{2 pi i m / M}, m = 0..M-1."""
    return np.exp(2j * np.pi * np.arange(M) / M)


# -- Laurent series ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LaurentSeries:
    """Coefficients g_j for j in [-K, K], stored at position j + K."""

    coeffs: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.ndim != 1 or arr.size % 2 == 0:
            raise ValueError(f"coeffs must be a 1-D array of odd length, got shape {arr.shape}")
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_mapping(cls, values: dict[int, complex], K: int | None = None) -> LaurentSeries:
        """Build a series from {index: coefficient}, zero elsewhere."""
        width = max((abs(j) for j in values), default=0)
        K = max(width, K or 0, 1)
        coeffs = np.zeros(2 * K + 1, dtype=complex)
        for j, v in values.items():
            coeffs[j + K] = v
        return cls(coeffs)

    @classmethod
    def zeros(cls, K: int) -> LaurentSeries:
        return cls(np.zeros(2 * K + 1, dtype=complex))

    @property
    def K(self) -> int:
        return (self.coeffs.size - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def coefficient(self, j: int) -> complex:
        if abs(j) > self.K:
            return 0j
        return complex(self.coeffs[j + self.K])

    def coefficients(self, indices: Iterable[int]) -> np.ndarray:
        """Zero-padded coefficient lookup for an array of indices."""
        idx = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices)
        out = np.zeros(idx.shape, dtype=complex)
        inside = np.abs(idx) <= self.K
        out[inside] = self.coeffs[idx[inside] + self.K]
        return out

    def restricted(self, lo: int | None = None, hi: int | None = None) -> LaurentSeries:
        """Copy keeping only indices lo <= j <= hi."""
        j = self.indices
        keep = np.ones(j.shape, dtype=bool)
        if lo is not None:
            keep &= j >= lo
        if hi is not None:
            keep &= j <= hi
        return LaurentSeries(np.where(keep, self.coeffs, 0), self.tail_bound)

    def padded(self, K: int) -> LaurentSeries:
        """Same series on a window of at least [-K, K]."""
        if K <= self.K:
            return self
        coeffs = np.zeros(2 * K + 1, dtype=complex)
        coeffs[K - self.K:K + self.K + 1] = self.coeffs
        return LaurentSeries(coeffs, self.tail_bound)

    def __call__(self, z):
        """Evaluate sum_j g_j z^j (Horner on each side)."""
        z = np.asarray(z, dtype=complex)
        K = self.K
        total = P.polyval(z, self.coeffs[K:])
        if K > 0:
            w = 1.0 / z
            total = total + w * P.polyval(w, self.coeffs[:K][::-1])
        if total.ndim == 0:
            return complex(total)
        return total

    def derivative_at(self, z):
        """Evaluate sum_j j g_j z^(j-1)."""
        z = np.asarray(z, dtype=complex)
        scaled = LaurentSeries(self.coeffs * self.indices)
        return scaled(z) / z

    def partial_sum(self, z, lo: int | None = None, hi: int | None = None):
        return self.restricted(lo, hi)(z)

    def on_grid(self, M: int) -> np.ndarray:
        """Values on the M-point unit-circle grid, via an inverse FFT."""
        placed = np.zeros(M, dtype=complex)
        np.add.at(placed, self.indices % M, self.coeffs)
        return M * np.fft.ifft(placed)

    def __add__(self, other: LaurentSeries) -> LaurentSeries:
        K = max(self.K, other.K)
        a, b = self.padded(K), other.padded(K)
        return LaurentSeries(a.coeffs + b.coeffs, max(self.tail_bound, other.tail_bound))

    def scaled(self, factor: complex) -> LaurentSeries:
        return LaurentSeries(self.coeffs * factor, self.tail_bound * abs(factor))


# -- Symbols -----------------------------------------------------------------


@dataclass(frozen=True)
class AnnularSymbol:
    """A symbol f analytic on rho_minus < |z| < rho_plus with winding number nu."""

    eval: SymbolFunction
    nu: int = 0
    rho_minus: float = 0.0
    rho_plus: float = math.inf
    name: str = "symbol"

    def __post_init__(self):
        if not self.rho_minus < 1.0 < self.rho_plus:
            raise ParameterError(
                f"{self.name}: analyticity radii must satisfy rho_minus < 1 < rho_plus, "
                f"got ({self.rho_minus}, {self.rho_plus})"
            )

    def __call__(self, z):
        values = np.asarray(self.eval(np.asarray(z, dtype=complex)), dtype=complex)
        if values.ndim == 0:
            return complex(values)
        return values

    def times_power(self, nu: int) -> AnnularSymbol:
        """The symbol z^nu * f."""
        if nu == 0:
            return self
        base = self.eval
        return AnnularSymbol(
            eval=lambda z: z**nu * base(z),
            nu=self.nu + nu,
            rho_minus=self.rho_minus,
            rho_plus=self.rho_plus,
            name=f"z^{nu}*{self.name}",
        )

    def scaled(self, factor: complex) -> AnnularSymbol:
        base = self.eval
        return AnnularSymbol(
            eval=lambda z: factor * base(z),
            nu=self.nu,
            rho_minus=self.rho_minus,
            rho_plus=self.rho_plus,
            name=f"{factor}*{self.name}",
        )


@dataclass(frozen=True)
class DeltaSymbol:
    """f(e^{i theta}) [1 + 2 pi z_n delta(theta - theta0)]."""

    base: AnnularSymbol
    theta0: float
    weight: Callable[[int], complex] = field(repr=False)

    def __post_init__(self):
        if not 0.0 <= self.theta0 < 2 * math.pi:
            raise ParameterError(f"theta0 must lie in [0, 2pi), got {self.theta0}")

    def z_n(self, n: int) -> complex:
        return complex(self.weight(n))

    @property
    def symbol_value(self) -> complex:
        """f(e^{i theta0})."""
        return complex(self.base(np.exp(1j * self.theta0)))


def constant_symbol(value: complex = 1.0) -> AnnularSymbol:
    return AnnularSymbol(
        eval=lambda z: np.full(np.shape(z), value, dtype=complex),
        name=f"const({value})",
    )


def _half_log_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    # Principal logs of factors with positive real part on |z| = 1, so no cut is crossed.
    return np.exp(0.5 * (np.log(num) - np.log(den)))


def magnetization_factor(lam: float) -> AnnularSymbol:
    """a(z) = sqrt((1 - lam/z) / (1 - lam z)), analytic on lam < |z| < 1/lam."""
    _check_lambda(lam)
    return AnnularSymbol(
        eval=lambda z: _half_log_ratio(1 - lam / z, 1 - lam * z),
        rho_minus=lam,
        rho_plus=1 / lam,
        name=f"magnetization(lam={lam})",
    )


def correlation_factor(lam: float) -> AnnularSymbol:
    """a(z) = sqrt((1 - lam z^-2) / (1 - lam z^2)), analytic on sqrt(lam) < |z| < 1/sqrt(lam)."""
    _check_lambda(lam)
    root = math.sqrt(lam)
    return AnnularSymbol(
        eval=lambda z: _half_log_ratio(1 - lam / z**2, 1 - lam * z**2),
        rho_minus=root,
        rho_plus=1 / root,
        name=f"correlation(lam={lam})",
    )


def product_symbol(
    inner: Sequence[tuple[complex, float]] = (),
    outer: Sequence[tuple[complex, float]] = (),
    nu: int = 0,
    scale: complex = 1.0,
) -> AnnularSymbol:
    """scale * z^nu * prod (1 - p z)^e * prod (1 - q/z)^e' with |p|, |q| < 1.

    `inner` holds (p, e) pairs, singular outside the unit circle; `outer` holds
    (q, e') pairs, singular inside it.
    """
    for p, _ in (*inner, *outer):
        if abs(p) >= 1:
            raise ParameterError(f"product_symbol: |{p}| must be < 1")

    def evaluate(z):
        log_f = np.zeros(np.shape(z), dtype=complex)
        for p, e in inner:
            log_f += e * np.log(1 - p * z)
        for q, e in outer:
            log_f += e * np.log(1 - q / z)
        return scale * np.exp(log_f)

    rho_minus = max((abs(q) for q, _ in outer), default=0.0)
    largest = max((abs(p) for p, _ in inner), default=0.0)
    rho_plus = 1 / largest if largest > 0 else math.inf
    base = AnnularSymbol(evaluate, 0, rho_minus, rho_plus, name="product")
    return base.times_power(nu)


def transpose_symbol(symbol: AnnularSymbol) -> AnnularSymbol:
    """z -> f(1/z): the symbol of the transposed Toeplitz matrix."""
    base = symbol.eval
    return AnnularSymbol(
        eval=lambda z: base(1 / z),
        nu=-symbol.nu,
        rho_minus=1 / symbol.rho_plus,
        rho_plus=1 / symbol.rho_minus if symbol.rho_minus > 0 else math.inf,
        name=f"transpose({symbol.name})",
    )


def _check_lambda(lam: float) -> None:
    if not 0.0 < lam < 1.0:
        raise ParameterError(f"lambda must lie in (0, 1), got {lam}")


# -- Sampling ----------------------------------------------------------------


def _tail_bound(coeffs: np.ndarray, K: int) -> float:
    width = max(1, math.ceil(0.1 * K))
    return float(max(np.max(np.abs(coeffs[:width])), np.max(np.abs(coeffs[-width:]))))


def series_from_samples(
    sampler: GridSampler,
    K: int,
    *,
    tail_tolerance: float = TAIL_TOLERANCE,
    quadrature_tolerance: float = QUADRATURE_TOLERANCE,
    max_K: int = MAX_K,
) -> LaurentSeries:
    """Trapezoid-rule Laurent coefficients from grid samples, doubling K until resolved.

    Args:
        sampler: Maps a grid size M to the function values on unit_circle(M).
        K: Initial truncation index.

    Raises:
        EvaluationError: If the sampler returns non-finite values.
        UnresolvedSeries: If the tail is not below tolerance at max_K.
    """
    K = max(1, int(K))
    while True:
        M = grid_size(K)
        samples = np.asarray(sampler(M), dtype=complex)
        if not np.all(np.isfinite(samples)):
            raise EvaluationError(f"non-finite symbol values on the {M}-point grid")

        spectrum = np.fft.fft(samples) / M
        coeffs = spectrum[np.arange(-K, K + 1) % M]
        scale = float(np.max(np.abs(coeffs)))
        tail = _tail_bound(coeffs, K)

        if tail <= tail_tolerance * scale or scale == 0.0:
            series = LaurentSeries(coeffs, tail)
            residual = np.max(np.abs(series.on_grid(M) - samples))
            if residual <= quadrature_tolerance * max(float(np.max(np.abs(samples))), 1e-300):
                logger.debug("Resolved series: K=%d, M=%d, tail=%.3g", K, M, tail)
                return series
            logger.debug("Grid residual %.3g too large at K=%d", residual, K)

        if 2 * K > max_K:
            raise UnresolvedSeries(
                f"tail {tail:.3g} exceeds {tail_tolerance:g} x {scale:.3g} at K={K} (cap {max_K})"
            )
        K *= 2


def sample_coefficients(
    symbol: AnnularSymbol | SymbolFunction,
    K: int = 8,
    *,
    tail_tolerance: float = TAIL_TOLERANCE,
    quadrature_tolerance: float = QUADRATURE_TOLERANCE,
    max_K: int = MAX_K,
) -> LaurentSeries:
    """Laurent coefficients f_j = (1/2pi) int f(e^{i theta}) e^{-i j theta} d theta.

    K is a lower bound: it is doubled until the outermost 10% of coefficients
    fall below tail_tolerance relative to the largest one.
    """
    if K < 1:
        raise ParameterError(f"K must be >= 1, got {K}")
    return series_from_samples(
        lambda M: symbol(unit_circle(M)),
        K,
        tail_tolerance=tail_tolerance,
        quadrature_tolerance=quadrature_tolerance,
        max_K=max_K,
    )


# -- Winding and decay --------------------------------------------------------


def winding_number(symbol: AnnularSymbol | SymbolFunction, M: int = 2048) -> int:
    """Winding number: the continuous phase increment of f around the circle over 2 pi.

    Raises:
        ZeroOnCircle: If |f| drops to the noise floor on the grid.
        NonIntegerWinding: If a phase step is too large to follow on the grid, or the
            increment is more than 0.1 away from an integer.
    """
    values = np.asarray(symbol(unit_circle(M)), dtype=complex)
    if not np.all(np.isfinite(values)):
        raise EvaluationError(f"non-finite symbol values on the {M}-point grid")
    modulus = np.abs(values)
    if modulus.max() == 0.0 or modulus.min() <= _ZERO_FLOOR * modulus.max():
        raise ZeroOnCircle(f"symbol vanishes on the unit circle (min |f| = {modulus.min():.3g})")

    phase = np.unwrap(np.angle(np.append(values, values[:1])))
    step = float(np.max(np.abs(np.diff(phase))))
    if step >= _MAX_PHASE_STEP:
        raise NonIntegerWinding(f"phase step {step:.3f} on the {M}-point grid is too coarse")
    raw = float(phase[-1] - phase[0]) / (2 * math.pi)
    nu = round(raw)
    if abs(raw - nu) > WINDING_SLACK:
        raise NonIntegerWinding(f"winding integral {raw:.4f} is not close to an integer (M={M})")
    return int(nu)


def _fit_rate(j: np.ndarray, magnitudes: np.ndarray) -> float:
    if j.size < _MIN_FIT_POINTS:
        raise InsufficientData(f"only {j.size} coefficients above the floor")
    # Fit the outer half where the algebraic prefactor varies least.
    half = j.size // 2
    if j.size - half >= _MIN_FIT_POINTS:
        j, magnitudes = j[half:], magnitudes[half:]
    fit = linregress(j, np.log(magnitudes))
    return float(np.exp(fit.slope))


def decay_rate(series: LaurentSeries) -> tuple[float, float]:
    """Geometric decay rates (rho_est_minus, rho_est_plus) of g_{-j} and g_j.

    A side with fewer than five coefficients above the floor reports 0.
    """
    scale = series.max_abs
    floor = TAIL_TOLERANCE * scale
    j = np.arange(1, series.K + 1)
    rates = []
    for side in (-1, 1):
        magnitudes = np.abs(series.coefficients(side * j))
        usable = magnitudes > floor
        try:
            rates.append(_fit_rate(j[usable], magnitudes[usable]))
        except InsufficientData as e:
            label = "minus" if side < 0 else "plus"
            logger.warning("decay_rate: %s side: %s; reporting 0", label, e)
            rates.append(0.0)
    return rates[0], rates[1]
