"""Frustrated XY ring: lowest-band spin correlations and mesoscopic magnetizations.

H = sum_j (sigma^x_j sigma^x_{j+1} - lam sigma^y_j sigma^y_{j+1}) on an odd ring of N
sites. Both observables reduce to Toeplitz determinants whose symbol carries a
delta term; this module builds those symbols and evaluates them exactly (dense LU)
and through their closed-form large-N expressions.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import partial
from typing import Literal

import numpy as np

from toeplitz_delta.errors import EvaluationError, ParameterError
from toeplitz_delta.symbol import (
    AnnularSymbol,
    DeltaSymbol,
    LaurentSeries,
    correlation_factor,
    magnetization_factor,
    sample_coefficients,
    unit_circle,
)
from toeplitz_delta.toeplitz_core import DeltaTerm, ToeplitzInstance, build_matrix, det_exact

logger = logging.getLogger(__name__)

Axis = Literal["x", "y"]
Quadrature = Literal["sum", "integral"]
Family = Literal["correlation", "magnetization"]

IMAG_TOLERANCE = 1e-9
_Q_TOLERANCE = 1e-9

CORRELATION_WINDING = {"x": 0, "y": 2}
MAGNETIZATION_WINDING = {"x": 0, "y": 1}


@dataclass(frozen=True)
class ChainParams:
    """Anisotropy lam, odd length N, momentum q in {2 pi j / N} and spin axis."""

    lam: float
    N: int
    q: float = 0.0
    alpha: Axis = "x"

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ParameterError(f"lambda must lie in (0, 1), got {self.lam}")
        if self.N < 3 or self.N % 2 == 0:
            raise ParameterError(f"chain length N must be odd and >= 3, got {self.N}")
        if self.alpha not in ("x", "y"):
            raise ParameterError(f"alpha must be 'x' or 'y', got {self.alpha!r}")
        index = self.q * self.N / (2 * math.pi)
        if abs(index - round(index)) > _Q_TOLERANCE:
            raise ParameterError(f"q={self.q} is not a momentum 2 pi j / {self.N}")

    @classmethod
    def from_index(cls, lam: float, N: int, j: int = 0, alpha: Axis = "x") -> ChainParams:
        return cls(lam=lam, N=N, q=2 * math.pi * (j % N) / N, alpha=alpha)

    @property
    def half(self) -> int:
        """(N - 1) / 2, the maximal distance on the ring."""
        return (self.N - 1) // 2

    @property
    def theta0(self) -> float:
        return self.q % (2 * math.pi)


def _fixed_weight(value: float, n: int) -> float:
    return value


def momentum_grid(N: int) -> np.ndarray:
    """Gamma^- = {2 pi j / N : j = 0..N-1}."""
    return 2 * np.pi * np.arange(N) / N


def finite_coefficients(symbol: AnnularSymbol, N: int) -> LaurentSeries:
    """f_j = (1/N) sum_{theta in Gamma^-} f(e^{i theta}) e^{-i j theta} for |j| <= (N-1)/2."""
    K = (N - 1) // 2
    values = np.asarray(symbol(unit_circle(N)), dtype=complex)
    if not np.all(np.isfinite(values)):
        raise EvaluationError(f"non-finite symbol values on the {N}-point momentum grid")
    spectrum = np.fft.fft(values) / N
    return LaurentSeries(spectrum[np.arange(-K, K + 1) % N])


def _real_part(value: complex, what: str) -> float:
    if abs(value.imag) > IMAG_TOLERANCE * max(1.0, abs(value.real)):
        raise EvaluationError(f"{what} has imaginary part {value.imag:.3g}")
    return float(value.real)


# -- Correlations --------------------------------------------------------------


def correlation_symbol(params: ChainParams) -> DeltaSymbol:
    """f = a z^nu with a = sqrt((1 - lam z^-2)/(1 - lam z^2)), nu = 0 (x) or 2 (y); z_n = -1/N."""
    base = correlation_factor(params.lam).times_power(CORRELATION_WINDING[params.alpha])
    return DeltaSymbol(
        base=base, theta0=params.theta0, weight=partial(_fixed_weight, -1.0 / params.N)
    )


def _correlation_series(params: ChainParams, n: int, quadrature: Quadrature) -> LaurentSeries:
    base = correlation_symbol(params).base
    if quadrature == "sum":
        return finite_coefficients(base, params.N)
    if quadrature == "integral":
        return sample_coefficients(base, max(n, 8))
    raise ParameterError(f"quadrature must be 'sum' or 'integral', got {quadrature!r}")


def correlation_exact(params: ChainParams, n: int, quadrature: Quadrature = "sum") -> float:
    """<q| sigma^alpha_1 sigma^alpha_{1+n} |q> = (-1)^n [(D~_n + c.c.) - D_n].

    Raises:
        ParameterError: Unless 1 <= n < N/2.
        EvaluationError: If the observable is not real to 1e-9.
    """
    if not 1 <= n < params.N / 2:
        raise ParameterError(f"distance n must satisfy 1 <= n < N/2 = {params.N / 2}, got {n}")
    delta_symbol = correlation_symbol(params)
    coeffs = _correlation_series(params, n, quadrature)

    plain = det_exact(build_matrix(ToeplitzInstance(n, coeffs))).value
    modified = det_exact(
        build_matrix(
            ToeplitzInstance(
                n,
                coeffs,
                DeltaTerm(delta_symbol.theta0, delta_symbol.z_n(n), delta_symbol.symbol_value),
            )
        )
    ).value
    bracket = (modified + modified.conjugate()) - plain
    value = (-1) ** n * _real_part(bracket, f"correlation bracket at n={n}")
    logger.debug("correlation %s N=%d n=%d: %.12g", params.alpha, params.N, n, value)
    return value


def correlation_asymptotic(params: ChainParams, n: int) -> float:
    """Closed-form large-n correlation, branching on the parity of n."""
    if n < 2:
        raise ParameterError(f"asymptotic correlation needs n >= 2, got {n}")
    lam, N, q = params.lam, params.N, params.q
    if params.alpha == "x":
        ratio_sq = (lam / (1 - lam**2)) ** 2
        prefactor = 4.0 if n % 2 == 0 else 2 * (1 + lam**2) / lam
        szego_part = math.sqrt(1 - lam**2) * (1 + prefactor * ratio_sq * lam**n / (math.pi * n**2))
        sign = 1.0 if n % 2 == 0 else -1.0
        return sign * szego_part * (1 - 2 * n / N)

    band = 2 / (1 - lam) * lam**n / (math.pi * n)
    denominator = math.sqrt(1 + lam**2 - 2 * lam * math.cos(2 * q))
    if n % 2 == 0:
        phase = 2**2.5 * math.cos(n * q)
    else:
        phase = 2**1.5 * (
            lam**-0.5 * math.cos((n + 1) * q) + lam**0.5 * math.cos((n - 1) * q)
        )
    return band + phase / denominator * lam ** (n / 2) / (N * math.sqrt(math.pi * n))


# -- Magnetization ---------------------------------------------------------------


def magnetization_symbol(params: ChainParams) -> DeltaSymbol:
    """f = a z^nu with a = sqrt((1 - lam/z)/(1 - lam z)), nu = 0 (x) or 1 (y), theta0 = 0.

    The weight z_n = -2/N reproduces f~_j = f_j - 2/N since f(1) = 1.
    """
    base = magnetization_factor(params.lam).times_power(MAGNETIZATION_WINDING[params.alpha])
    return DeltaSymbol(base=base, theta0=0.0, weight=partial(_fixed_weight, -2.0 / params.N))


def magnetization_exact(params: ChainParams, quadrature: Quadrature = "integral") -> float:
    """<g^-| sigma^alpha_1 Pi^alpha |g^-> ~ (-1)^n D~_n with n = (N - 1)/2."""
    n = params.half
    delta_symbol = magnetization_symbol(params)
    if quadrature == "integral":
        coeffs = sample_coefficients(delta_symbol.base, max(n, 8))
    elif quadrature == "sum":
        coeffs = finite_coefficients(delta_symbol.base, params.N)
    else:
        raise ParameterError(f"quadrature must be 'sum' or 'integral', got {quadrature!r}")

    term = DeltaTerm(0.0, delta_symbol.z_n(n), delta_symbol.symbol_value)
    value = det_exact(build_matrix(ToeplitzInstance(n, coeffs, term))).value
    return (-1) ** n * _real_part(value, f"magnetization determinant at N={params.N}")


def magnetization_asymptotic(params: ChainParams) -> float:
    """(-1)^n (1 - lam^2)^{1/4} / N for x and (2/N)(1 + lam)^{1/4} / (1 - lam)^{3/4} for y."""
    lam, N = params.lam, params.N
    if params.alpha == "x":
        return (-1) ** params.half * (1 - lam**2) ** 0.25 / N
    return 2 / N * (1 + lam) ** 0.25 / (1 - lam) ** 0.75


def ground_state_magnetization(
    params: ChainParams, theta: float, psi: float, asymptotic: bool = False
) -> float:
    """<g| sigma^alpha_1 |g> for |g> = cos(theta)|g^-> + sin(theta) e^{i psi} |g^+>."""
    m = magnetization_asymptotic(params) if asymptotic else magnetization_exact(params)
    if params.alpha == "x":
        return math.cos(psi) * math.sin(2 * theta) * m
    return (-1) ** params.half * math.sin(psi) * math.sin(2 * theta) * m


# -- c_{-n} ------------------------------------------------------------------------


def _c_eval(lam: float, family: Family):
    if family == "magnetization":
        return lambda w: np.exp(-0.5 * (np.log(1 - lam * w) + np.log(1 - lam / w)))
    if family == "correlation":
        return lambda w: np.exp(-0.5 * (np.log(1 - lam * w**2) + np.log(1 - lam / w**2)))
    raise ParameterError(f"family must be 'correlation' or 'magnetization', got {family!r}")


def c_coefficient(
    lam: float, n: int, family: Family, asymptotic: bool = False, M: int = 4096
) -> float:
    """c_{-n} = (1/2 pi i) contour integral of c(w) w^{n-1} over |w| = 1, or its large-n form.

    The large-n forms are sqrt(2/(1 - lam^2)) lam^{n/2} / sqrt(pi n) for even n
    (zero for odd n) in the correlation family and lam^n / sqrt(pi n (1 - lam^2))
    in the magnetization family.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if not 0.0 < lam < 1.0:
        raise ParameterError(f"lambda must lie in (0, 1), got {lam}")
    c = _c_eval(lam, family)
    if asymptotic:
        if family == "correlation":
            if n % 2:
                return 0.0
            return math.sqrt(2 / (1 - lam**2)) * lam ** (n / 2) / math.sqrt(math.pi * n)
        return lam**n / math.sqrt(math.pi * n * (1 - lam**2))

    w = unit_circle(M)
    return float(np.mean(c(w) * w**n).real)
