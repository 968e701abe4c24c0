"""Large-n formulas for Toeplitz determinants with and without the delta term.

Covers the strong Szego limit, the nonzero-winding band determinants Delta and
Delta~(l), the two delta-term theorems, the decay condition on Delta~/Delta and
the closed-form Wiener-Hopf solution X_1 of the resolvent problem.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import linregress

from toeplitz_delta.errors import (
    CoefficientRangeExceeded,
    ConditionViolated,
    InsufficientData,
    ParameterError,
    ZeroBandDeterminant,
)
from toeplitz_delta.symbol import decay_rate
from toeplitz_delta.toeplitz_core import DetValue
from toeplitz_delta.wiener_hopf import NEAR_SINGULAR, WienerHopfData, log_derivative_b

logger = logging.getLogger(__name__)

UNDERFLOW = 1e-300
_RHO_MARGIN = 0.02


@dataclass(frozen=True)
class AsymptoticResult:
    """An asymptotic value with its predicted geometric error rate per unit n."""

    value: complex
    error_order: float
    diagnostics: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.error_order < 1.0:
            raise ParameterError(f"error_order must lie in [0, 1), got {self.error_order}")


@dataclass(frozen=True)
class BandDeterminants:
    """Delta_{nu,n} and Delta~_{nu,n}(l), l = 1..|nu|, from the far coefficients d_j."""

    nu: int
    n: int
    log_delta: DetValue
    log_delta_tilde: tuple[DetValue, ...]
    d_coeffs: dict[int, complex]
    underflow: bool = False

    @property
    def delta(self) -> complex:
        return self.log_delta.value

    @property
    def delta_tilde(self) -> np.ndarray:
        return np.array([d.value for d in self.log_delta_tilde], dtype=complex)

    @property
    def ratios(self) -> np.ndarray:
        """Delta~(l) / Delta, formed from the log moduli."""
        if self.log_delta.is_zero:
            raise ZeroBandDeterminant(f"Delta_{{{self.nu},{self.n}}} = 0")
        return np.array([d / self.log_delta for d in self.log_delta_tilde], dtype=complex)


def default_rho(wh: WienerHopfData) -> float:
    """Largest fitted decay rate of b and c plus 0.02, clipped to [0.02, 0.99]."""
    rates = (*decay_rate(wh.b), *decay_rate(wh.c))
    return float(min(max(max(rates) + _RHO_MARGIN, _RHO_MARGIN), 0.99))


def _resolve_rho(wh: WienerHopfData, rho: float | None) -> float:
    if rho is None:
        return default_rho(wh)
    if not 0.0 < rho < 1.0:
        raise ParameterError(f"rho must lie in (0, 1), got {rho}")
    return rho


def _szego_log(wh: WienerHopfData, n: int) -> complex:
    L = wh.log_a
    k = np.arange(1, L.K + 1)
    return complex(n * wh.log_a0 + np.sum(k * L.coefficients(k) * L.coefficients(-k)))


def szego(wh: WienerHopfData, n: int, rho: float | None = None) -> AsymptoticResult:
    """exp[n (log a)_0 + sum_{k>=1} k (log a)_k (log a)_{-k}], correct up to O(rho^{2n})."""
    rho = _resolve_rho(wh, rho)
    return AsymptoticResult(
        value=complex(np.exp(_szego_log(wh, n))),
        error_order=rho**2,
        diagnostics={"rho": rho, "tail_bound": wh.log_a.tail_bound},
    )


def _slogdet(matrix: np.ndarray) -> DetValue:
    sign, log_abs = np.linalg.slogdet(matrix)
    if sign == 0:
        return DetValue(-math.inf, 0.0)
    return DetValue(float(log_abs), float(np.angle(sign)))


def band_determinants(wh: WienerHopfData, nu: int, n: int, theta0: float) -> BandDeterminants:
    """Delta_{nu,n} = det(d_{j-k}) with d_j = b_{n+j} (nu < 0) or c_{-n-j} (nu > 0).

    Delta~(l) replaces column l by (1, e^{-/+ i theta0}, ..., e^{-/+ i (|nu|-1) theta0}),
    the minus sign for nu < 0.

    Raises:
        ParameterError: If nu is zero.
        CoefficientRangeExceeded: If n + |nu| - 1 lies outside the factor series window.
    """
    if nu == 0:
        raise ParameterError("band determinants need nu != 0")
    m = abs(nu)
    series = wh.b if nu < 0 else wh.c
    if n + m - 1 > series.K:
        raise CoefficientRangeExceeded(
            f"Delta_{{{nu},{n}}} needs coefficient index {n + m - 1}, series has K={series.K}"
        )

    offsets = np.arange(-(m - 1), m)
    if nu < 0:
        d = series.coefficients(n + offsets)
    else:
        d = series.coefficients(-n - offsets)
    d_coeffs = {int(j): complex(v) for j, v in zip(offsets, d)}

    j = np.arange(m)
    matrix = np.array([[d_coeffs[int(r - s)] for s in j] for r in j], dtype=complex)
    log_delta = _slogdet(matrix)
    # exact zeros (odd-index c of the correlation symbol) are structural, not underflow
    tiny_delta = not log_delta.is_zero and log_delta.log_modulus < math.log(UNDERFLOW)
    underflow = bool(0 < np.max(np.abs(d)) < UNDERFLOW or tiny_delta)
    if underflow:
        logger.warning("band coefficients below %.0e at nu=%d, n=%d", UNDERFLOW, nu, n)

    sign = -1.0 if nu < 0 else 1.0
    phases = np.exp(sign * 1j * j * theta0)

    log_delta_tilde = []
    for l in range(m):
        replaced = matrix.copy()
        replaced[:, l] = phases
        log_delta_tilde.append(_slogdet(replaced))

    return BandDeterminants(
        nu=nu,
        n=n,
        log_delta=log_delta,
        log_delta_tilde=tuple(log_delta_tilde),
        d_coeffs=d_coeffs,
        underflow=underflow,
    )


def _fh_det(wh: WienerHopfData, nu: int, n: int, bands: BandDeterminants) -> DetValue:
    log_value = _szego_log(wh, n + abs(nu))
    if nu > 0:
        log_value -= 2 * nu * wh.log_a0
    szego_part = DetValue(log_value.real, math.remainder(log_value.imag, 2 * math.pi))
    return szego_part * (-1) ** (n * nu) * bands.log_delta


def fh_nonzero(
    wh: WienerHopfData,
    nu: int,
    n: int,
    rho: float | None = None,
    theta0: float = 0.0,
) -> AsymptoticResult:
    """D_n(z^nu a) ~ (-1)^{n nu} D_{n+|nu|}(a) Delta_{nu,n}.

    For nu > 0 Delta is scaled by exp(-2 nu (log a)_0), so the value does not
    depend on how (log a)_0 is split between the factors.

    Raises:
        ZeroBandDeterminant: If Delta vanishes without underflow.
    """
    rho = _resolve_rho(wh, rho)
    bands = band_determinants(wh, nu, n, theta0)
    if bands.log_delta.is_zero and not bands.underflow:
        raise ZeroBandDeterminant(f"Delta_{{{nu},{n}}} = 0")

    det = _fh_det(wh, nu, n, bands)
    return AsymptoticResult(
        value=det.value,
        error_order=rho ** (abs(nu) + 3),
        diagnostics={
            "rho": rho,
            "delta_abs": abs(bands.delta),
            "log_delta": bands.log_delta.log_modulus,
            "log_modulus": det.log_modulus,
            "underflow": float(bands.underflow),
        },
    )


def theorem1(
    wh: WienerHopfData, theta0: float, z_n: complex, n: int, rho: float | None = None
) -> AsymptoticResult:
    """Zero winding: D~_n ~ Szego(n) {1 + z_n [n + i d/d theta log b(e^{i theta0})]}."""
    base = szego(wh, n, rho)
    beta = log_derivative_b(wh, theta0)
    return AsymptoticResult(
        value=base.value * (1 + z_n * (n + beta)),
        error_order=base.diagnostics["rho"],
        diagnostics={**base.diagnostics, "log_derivative_b": beta.real},
    )


def theorem2(
    wh: WienerHopfData,
    nu: int,
    theta0: float,
    z_n: complex,
    n: int,
    rho: float | None = None,
    base: DetValue | None = None,
) -> AsymptoticResult:
    """Nonzero winding: D~_n ~ D_n(f) {1 + z_n [-c(t) t^{n+1} sum_j Delta~(j)/Delta t^{-j} + n]}.

    For nu < 0 the bracket uses b(t) t^{-(n+1)} and t^{+j}. The O(1) term of the
    bracket is not modeled.

    Args:
        base: D_n(f) to use in place of the asymptotic value from fh_nonzero.

    Raises:
        ZeroBandDeterminant: If Delta_{nu,n} is zero.
    """
    rho = _resolve_rho(wh, rho)
    bands = band_determinants(wh, nu, n, theta0)
    ratios = bands.ratios
    t = np.exp(1j * theta0)
    j = np.arange(1, abs(nu) + 1)

    if nu > 0:
        sum_term = -wh.c(t) * t ** (n + 1) * np.sum(ratios * t ** (-j))
    else:
        sum_term = -wh.b(t) * t ** (-(n + 1)) * np.sum(ratios * t**j)
    bracket = complex(sum_term + n)

    det = base if base is not None else _fh_det(wh, nu, n, bands)
    value = det * (1 + z_n * bracket)
    condition = _condition_ratio(bands, n, rho)
    return AsymptoticResult(
        value=value.value,
        error_order=rho,
        diagnostics={
            "rho": rho,
            "sigma": rho,
            "delta_abs": abs(bands.delta),
            "condition_ratio": condition,
            "bracket_abs": abs(bracket),
            "log_modulus": value.log_modulus,
        },
    )


def _condition_ratio(bands: BandDeterminants, n: int, rho: float) -> float:
    log_ratio = np.log(np.max(np.abs(bands.ratios))) + 2 * n * math.log(rho)
    return float(np.exp(log_ratio))


def condition_ratio(
    wh: WienerHopfData, nu: int, n: int, theta0: float, rho: float | None = None
) -> float:
    """max_j |Delta~(j) / Delta| rho^{2n}; should tend to zero along an n-sweep."""
    return _condition_ratio(band_determinants(wh, nu, n, theta0), n, _resolve_rho(wh, rho))


def check_condition_decay(ratios_by_n: Mapping[int, float]) -> None:
    """Require the condition ratio to decrease within each parity class of n.

    Raises:
        ConditionViolated: Naming the first n at which the ratio fails to decrease.
    """
    for parity in (0, 1):
        ns = sorted(n for n in ratios_by_n if n % 2 == parity)
        for prev, cur in zip(ns, ns[1:]):
            if not ratios_by_n[cur] < ratios_by_n[prev]:
                raise ConditionViolated(
                    f"condition ratio does not decay: n={prev} -> {ratios_by_n[prev]:.3g}, "
                    f"n={cur} -> {ratios_by_n[cur]:.3g}"
                )


def fit_decay_rate(ns: Sequence[int], errors: Sequence[float]) -> float:
    """exp(slope) of a least-squares line through log(errors) against n.

    Raises:
        InsufficientData: If fewer than three errors are positive and finite.
    """
    ns = np.asarray(ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    usable = np.isfinite(errors) & (errors > 0)
    if np.count_nonzero(usable) < 3:
        raise InsufficientData(f"need three positive errors to fit a rate, got {usable.sum()}")
    fit = linregress(ns[usable], np.log(errors[usable]))
    return float(np.exp(fit.slope))


# -- Closed-form resolvent solution ----------------------------------------------------


def u_coefficients(wh: WienerHopfData, nu: int, theta0: float, n: int) -> np.ndarray:
    """u_k = -a_-^{-1}(t) t^{-(nu-1)} Delta~(k) / Delta, k = 1..nu."""
    if nu <= 0:
        raise ParameterError(f"u coefficients need nu > 0, got {nu}")
    t = np.exp(1j * theta0)
    bands = band_determinants(wh, nu, n, theta0)
    return -wh.a_minus_inv(t) * t ** (-(nu - 1)) * bands.ratios


def u_coefficients_direct(wh: WienerHopfData, nu: int, theta0: float, n: int) -> np.ndarray:
    """Solve sum_k u_k c_{j-n-nu+k} = -a_-^{-1}(t) t^{-j}, j = 0..nu-1, directly."""
    if nu <= 0:
        raise ParameterError(f"u coefficients need nu > 0, got {nu}")
    t = np.exp(1j * theta0)
    j = np.arange(nu)[:, None]
    k = np.arange(1, nu + 1)[None, :]
    system = wh.c.coefficients(j - n - nu + k)
    rhs = -wh.a_minus_inv(t) * t ** (-np.arange(nu))
    return np.linalg.solve(system, rhs)


def _plus_shifted(wh: WienerHopfData, power: int, z):
    """[c z^power]_+(z) = z^power sum_{j >= -power} c_j z^j."""
    return wh.c.partial_sum(z, lo=-power) * np.asarray(z, dtype=complex) ** power


def x_at_theta0_asymptotic(wh: WienerHopfData, nu: int, theta0: float, n: int) -> complex:
    """X_1(e^{i theta0}) from the continuity values of the closed form."""
    if nu < 0:
        raise ParameterError(f"closed-form X_1 needs nu >= 0, got {nu}")
    t = np.exp(1j * theta0)
    m = n + nu
    ap_inv, am_inv = wh.a_plus_inv(t), wh.a_minus_inv(t)

    total = m * ap_inv * am_inv + t * ap_inv**2 * wh.c.derivative_at(t)
    if nu > 0:
        k = np.arange(nu)
        total += am_inv * np.sum((k - nu) * wh.a_plus_inv.coefficients(k) * t**k)
        u = u_coefficients(wh, nu, theta0, n)
        shifted = [_plus_shifted(wh, n + nu - kk, t) for kk in range(1, nu + 1)]
        total += ap_inv * np.sum(u * np.asarray(shifted))
    return complex(total / t**nu)


def wh_solution_X1(wh: WienerHopfData, nu: int, theta0: float, n: int, z) -> complex:
    """Leading large-n solution X_1(z) of the resolvent problem, |z| = 1, nu >= 0."""
    if nu < 0:
        raise ParameterError(f"closed-form X_1 needs nu >= 0, got {nu}")
    t = np.exp(1j * theta0)
    z = complex(z)
    if abs(z - t) < NEAR_SINGULAR:
        return x_at_theta0_asymptotic(wh, nu, theta0, n)

    m = n + nu
    ap_inv_z = wh.a_plus_inv(z)
    total = (
        t ** (-(m - 1)) * ap_inv_z * wh.a_plus_inv(t)
        * (wh.c(z) * z**m - wh.c(t) * t**m) / (z - t)
    )
    if nu > 0:
        k = np.arange(nu)
        quotient = (z ** (k - nu) - t ** (k - nu)) / (z - t)
        total += (
            t ** (-(n - 1)) * wh.a_minus_inv(z) * z**m
            * np.sum(wh.a_plus_inv.coefficients(k) * quotient)
        )
        u = u_coefficients(wh, nu, theta0, n)
        shifted = [_plus_shifted(wh, n + nu - kk, z) for kk in range(1, nu + 1)]
        total += ap_inv_z * np.sum(u * np.asarray(shifted))
    return complex(total / z**nu)
