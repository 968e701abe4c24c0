"""Exact determinants of the (delta-modified) Toeplitz matrix over an n-range."""

from __future__ import annotations

from toeplitz_delta.sweeps.base import BaseSweep, Row
from toeplitz_delta.sweeps.prepared import delta_term, symbol_series
from toeplitz_delta.toeplitz_core import ToeplitzInstance, build_matrix, det_exact


class DetSweep(BaseSweep):
    """Rows (n, exact_value_re, exact_value_im, log_modulus)."""

    @property
    def name(self) -> str:
        return "det"

    @property
    def columns(self) -> list[str]:
        return ["n", "exact_value_re", "exact_value_im", "log_modulus"]

    def row(self, n: int) -> Row:
        inst = ToeplitzInstance(n, symbol_series(self.config), delta_term(self.config, n))
        det = det_exact(build_matrix(inst))
        value = det.value
        return {
            "n": n,
            "exact_value_re": value.real,
            "exact_value_im": value.imag,
            "log_modulus": det.log_modulus,
        }
