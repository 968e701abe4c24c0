"""Exact finite-n Toeplitz computations.

Dense LU everywhere: the delta-modified matrix, its determinant in
log-modulus/phase form, the resolvent system sum_k f_{j-k} x_k = e^{-i theta0 j}
and the residual series U, V of f X = Y + U z^n + V.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.linalg import LinAlgWarning, lstsq, lu_factor, lu_solve, toeplitz

from toeplitz_delta.errors import CoefficientRangeExceeded, ParameterError, SingularMatrix
from toeplitz_delta.symbol import LaurentSeries, unit_circle

logger = logging.getLogger(__name__)

MAX_DENSE_N = 512
PIVOT_TOLERANCE = 1e-13
RESIDUAL_TOLERANCE = 1e-9
CRAMER_CHECK_MAX_N = 8
_CRAMER_TOLERANCE = 1e-8


# -- Types ---------------------------------------------------------------------


@dataclass(frozen=True)
class DeltaTerm:
    """The rank-one modification z_n f(e^{i theta0}) e^{-i(j-k) theta0}.

    symbol_value defaults to the series value f(e^{i theta0}).
    """

    theta0: float
    z_n: complex
    symbol_value: complex | None = None


@dataclass(frozen=True)
class ToeplitzInstance:
    n: int
    coeffs: LaurentSeries
    delta: DeltaTerm | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"n must be >= 1, got {self.n}")


@dataclass(frozen=True)
class DetValue:
    """A determinant carried as exp(log_modulus) * e^{i phase}; log_modulus = -inf means 0."""

    log_modulus: float
    phase: float = 0.0

    @classmethod
    def from_value(cls, value: complex) -> DetValue:
        if value == 0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(value)), float(np.angle(value)))

    @property
    def value(self) -> complex:
        if self.is_zero:
            return 0j
        return _polar(self.log_modulus, self.phase)

    @property
    def is_zero(self) -> bool:
        return self.log_modulus == -math.inf

    def __mul__(self, other: complex | DetValue) -> DetValue:
        if not isinstance(other, DetValue):
            other = DetValue.from_value(complex(other))
        if self.is_zero or other.is_zero:
            return DetValue(-math.inf, 0.0)
        return DetValue(self.log_modulus + other.log_modulus, _wrap(self.phase + other.phase))

    __rmul__ = __mul__

    def __truediv__(self, other: DetValue) -> complex:
        """The ratio of two determinants as a plain complex number."""
        if other.is_zero:
            raise SingularMatrix("division by a zero determinant")
        if self.is_zero:
            return 0j
        return _polar(self.log_modulus - other.log_modulus, self.phase - other.phase)


@dataclass(frozen=True)
class ResolventSolution:
    """x_j for j = 0..n-1 with the right-hand side y_j = e^{-i theta0 j}."""

    x: np.ndarray
    y: np.ndarray
    theta0: float = 0.0
    residual: float = field(default=0.0, compare=False)

    @property
    def n(self) -> int:
        return self.x.size

    def X_at(self, z):
        """X(z) = sum_j x_j z^j."""
        values = P.polyval(np.asarray(z, dtype=complex), self.x)
        if np.ndim(values) == 0:
            return complex(values)
        return values


def _saturate(x: float) -> float:
    return math.copysign(math.inf, x) if x else 0.0


def _polar(log_modulus: float, phase: float) -> complex:
    """exp(log_modulus) e^{i phase}; past the float range each nonzero part is +/-inf."""
    unit = complex(math.cos(phase), math.sin(phase))
    try:
        return math.exp(log_modulus) * unit
    except OverflowError:
        return complex(_saturate(unit.real), _saturate(unit.imag))


def _wrap(phase: float) -> float:
    """Map a phase into (-pi, pi]."""
    wrapped = math.remainder(phase, 2 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


# -- Matrices and determinants ----------------------------------------------------


def delta_vectors(theta0: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(u, w) with u_j = e^{-i j theta0}, w_k = e^{i k theta0}, so u w^T = e^{-i(j-k) theta0}."""
    j = np.arange(n)
    return np.exp(-1j * j * theta0), np.exp(1j * j * theta0)


def build_matrix(inst: ToeplitzInstance) -> np.ndarray:
    """Dense T_n(f) with entries f_{j-k}, plus the rank-one delta term when present.

    Raises:
        CoefficientRangeExceeded: If the series window is smaller than n - 1.
    """
    n, f = inst.n, inst.coeffs
    if f.K < n - 1:
        raise CoefficientRangeExceeded(f"need coefficients up to |j| = {n - 1}, series has K={f.K}")
    j = np.arange(n)
    matrix = toeplitz(f.coefficients(j), f.coefficients(-j)).astype(complex)

    if inst.delta is not None:
        d = inst.delta
        value = d.symbol_value if d.symbol_value is not None else f(np.exp(1j * d.theta0))
        u, w = delta_vectors(d.theta0, n)
        matrix += d.z_n * value * np.outer(u, w)
    return matrix


def det_exact(matrix: np.ndarray) -> DetValue:
    """Determinant by LU with partial pivoting, accumulated in log form.

    An exactly zero pivot gives the log_modulus = -inf sentinel.

    Raises:
        ParameterError: If the matrix is not square or exceeds the dense size limit.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ParameterError(f"det_exact needs a square matrix, got shape {matrix.shape}")
    n = matrix.shape[0]
    if n > MAX_DENSE_N:
        raise ParameterError(f"n={n} exceeds the dense LU limit {MAX_DENSE_N}")
    if n == 0:
        return DetValue(0.0, 0.0)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix)
    pivots = np.diag(lu)
    if np.any(pivots == 0):
        return DetValue(-math.inf, 0.0)

    swaps = int(np.count_nonzero(piv != np.arange(n)))
    log_modulus = float(np.sum(np.log(np.abs(pivots))))
    phase = float(np.sum(np.angle(pivots))) + math.pi * swaps
    return DetValue(log_modulus, _wrap(phase))


def _factor(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """LU factors, rejecting pivots below PIVOT_TOLERANCE times their row norm."""
    n = matrix.shape[0]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix)

    perm = np.arange(n)
    for i, p in enumerate(piv):
        perm[i], perm[p] = perm[p], perm[i]
    row_norms = np.linalg.norm(matrix[perm], axis=1)
    pivots = np.abs(np.diag(lu))
    bad = np.flatnonzero((pivots == 0) | (pivots < PIVOT_TOLERANCE * row_norms))
    if bad.size:
        i = int(bad[0])
        raise SingularMatrix(
            f"pivot {i} is {pivots[i]:.3g}, below {PIVOT_TOLERANCE:g} x row norm {row_norms[i]:.3g}"
        )
    logger.debug("LU n=%d: min pivot %.3g", n, pivots.min())
    return lu, piv


def rhs_polynomial(theta0: float, n: int, z):
    """Y(z) = sum_{j<n} e^{-i theta0 j} z^j.

    Closed form e^{-i theta0 (n-1)} (z^n - e^{i theta0 n}) / (z - e^{i theta0}) away from t.
    """
    t = np.exp(1j * theta0)
    z = np.asarray(z, dtype=complex)
    near = np.abs(z - t) < 1e-6
    closed = t ** (-(n - 1)) * (z**n - t**n) / np.where(near, 1, z - t)
    values = np.where(near, P.polyval(z, t ** (-np.arange(n))), closed)
    if values.ndim == 0:
        return complex(values)
    return values


# -- Resolvent ---------------------------------------------------------------------


def cramer_solution(f: LaurentSeries, n: int, theta0: float) -> np.ndarray:
    """x_j = D_{n,j+1}(f) / D_n(f), each numerator with column j+1 replaced by y.

    Raises:
        SingularMatrix: If D_n(f) is zero.
    """
    matrix = build_matrix(ToeplitzInstance(n, f))
    y, _ = delta_vectors(theta0, n)
    base = det_exact(matrix)
    if base.is_zero:
        raise SingularMatrix(f"D_n(f) = 0 at n={n}")
    x = np.empty(n, dtype=complex)
    for j in range(n):
        replaced = matrix.copy()
        replaced[:, j] = y
        x[j] = det_exact(replaced) / base
    return x


def solve_resolvent(f: LaurentSeries, n: int, theta0: float) -> ResolventSolution:
    """Solve sum_k f_{j-k} x_k = e^{-i theta0 j}, j = 0..n-1, by dense LU.

    For n <= 8 the solution is also compared with explicit column-replacement
    determinants and a mismatch is logged.

    Raises:
        SingularMatrix: If D_n(f) vanishes within pivot tolerance or the residual check fails.
    """
    matrix = build_matrix(ToeplitzInstance(n, f))
    y, _ = delta_vectors(theta0, n)
    x = lu_solve(_factor(matrix), y)

    residual = float(np.linalg.norm(matrix @ x - y))
    if not math.isfinite(residual) or residual > RESIDUAL_TOLERANCE * np.linalg.norm(x):
        raise SingularMatrix(f"resolvent residual {residual:.3g} too large at n={n}")

    if n <= CRAMER_CHECK_MAX_N:
        cramer = cramer_solution(f, n, theta0)
        gap = float(np.max(np.abs(cramer - x)))
        if gap > _CRAMER_TOLERANCE * max(float(np.max(np.abs(x))), 1.0):
            logger.warning("Cramer check: LU and determinant ratios differ by %.3g at n=%d", gap, n)
    return ResolventSolution(x=x, y=y, theta0=theta0, residual=residual)


def det_delta_via_resolvent(
    f: LaurentSeries,
    theta0: float,
    z_n: complex,
    n: int,
    symbol_value: complex | None = None,
) -> DetValue:
    """D_n(f) (1 + z_n f(e^{i theta0}) X(e^{i theta0}))."""
    base = det_exact(build_matrix(ToeplitzInstance(n, f)))
    if base.is_zero:
        raise SingularMatrix(f"D_n(f) = 0 at n={n}")
    if z_n == 0:
        return base
    t = np.exp(1j * theta0)
    value = symbol_value if symbol_value is not None else f(t)
    sol = solve_resolvent(f, n, theta0)
    return base * (1 + z_n * value * sol.X_at(t))


def residual_uv(
    f: LaurentSeries, sol: ResolventSolution, n: int
) -> tuple[LaurentSeries, LaurentSeries]:
    """Series U, V with f X = Y + U z^n + V.

    u_j = sum_k f_{j-k+n} x_k for j >= 0 and v_{-j} = sum_k f_{-j-k} x_k for j >= 1.

    Raises:
        CoefficientRangeExceeded: If the series window is smaller than n - 1.
    """
    if f.K < n - 1:
        raise CoefficientRangeExceeded(f"need coefficients up to |j| = {n - 1}, series has K={f.K}")
    K = f.K
    # np.convolve covers product indices -K..K+n-1
    product = np.convolve(f.coeffs, sol.x)
    idx = np.arange(-K, K + n)

    width = max(K, 1)
    u = np.zeros(2 * width + 1, dtype=complex)
    above = idx >= n
    u[width + idx[above] - n] = product[above]

    v = np.zeros(2 * K + 1, dtype=complex)
    below = idx <= -1
    v[K + idx[below]] = product[below]
    return LaurentSeries(u), LaurentSeries(v)


def refine_solution(
    matrix: np.ndarray, rhs: np.ndarray, x: np.ndarray | None = None, steps: int = 2
) -> np.ndarray:
    """Least-squares solve followed by residual-correction steps, without LU."""
    matrix = np.asarray(matrix, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    if x is None:
        x = lstsq(matrix, rhs)[0]
    x = np.array(x, dtype=complex)
    for _ in range(steps):
        x += lstsq(matrix, rhs - matrix @ x)[0]
    return x


def first_solvable_n(f: LaurentSeries, n_max: int, n_min: int = 1) -> int | None:
    """Smallest n in [n_min, n_max] whose LU of T_n(f) passes the pivot test."""
    for n in range(n_min, min(n_max, f.K + 1) + 1):
        try:
            _factor(build_matrix(ToeplitzInstance(n, f)))
        except SingularMatrix as e:
            logger.debug("n=%d not solvable: %s", n, e)
            continue
        return n
    return None


def perturbation_gain(
    f: LaurentSeries, n: int, theta0: float, eps: float, seed: int = 0
) -> float:
    """sup |Delta X| / eps on the unit circle for a random perturbation of Y with sup-norm eps."""
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    factors = _factor(build_matrix(ToeplitzInstance(n, f)))
    rng = np.random.default_rng(seed)
    grid = unit_circle(max(512, 4 * n))

    shape = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    shape /= np.max(np.abs(P.polyval(grid, shape)))
    dx = lu_solve(factors, eps * shape)
    return float(np.max(np.abs(P.polyval(grid, dx))) / eps)
