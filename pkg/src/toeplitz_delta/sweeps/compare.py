"""Exact determinants against the delta-term theorems, with a fitted error-decay rate."""

from __future__ import annotations

import logging
import math

from toeplitz_delta.asymptotics import check_condition_decay, fit_decay_rate, theorem1, theorem2
from toeplitz_delta.errors import ConditionViolated, InsufficientData
from toeplitz_delta.sweeps.base import BaseSweep, Row
from toeplitz_delta.sweeps.prepared import delta_term, factorization, symbol_series
from toeplitz_delta.toeplitz_core import ToeplitzInstance, build_matrix, det_exact

logger = logging.getLogger(__name__)


class CompareSweep(BaseSweep):
    @property
    def name(self) -> str:
        return "compare"

    @property
    def columns(self) -> list[str]:
        return [
            "n",
            "exact_re",
            "exact_im",
            "asymptotic_re",
            "asymptotic_im",
            "rel_error",
            "predicted_order",
            "condition_ratio",
            "warnings",
        ]

    def row(self, n: int) -> Row:
        cfg = self.config
        exact = det_exact(
            build_matrix(ToeplitzInstance(n, symbol_series(cfg), delta_term(cfg, n)))
        ).value

        wh = factorization(cfg)
        z_n = cfg.z_n(n)
        if cfg.nu == 0:
            result = theorem1(wh, cfg.theta0, z_n, n, cfg.rho)
        else:
            result = theorem2(wh, cfg.nu, cfg.theta0, z_n, n, cfg.rho)

        warnings = []
        if result.diagnostics.get("underflow"):
            warnings.append("band underflow")
        rel_error = abs(exact - result.value) / abs(exact) if exact != 0 else math.inf
        return {
            "n": n,
            "exact_re": exact.real,
            "exact_im": exact.imag,
            "asymptotic_re": result.value.real,
            "asymptotic_im": result.value.imag,
            "rel_error": rel_error,
            "predicted_order": result.error_order**n,
            "condition_ratio": result.diagnostics.get("condition_ratio"),
            "warnings": "; ".join(warnings),
        }

    def summary(self, rows: list[Row]) -> Row:
        """Fitted geometric rate of rel_error, and the condition-ratio verdict."""
        warnings = []
        try:
            rate = fit_decay_rate([r["n"] for r in rows], [r["rel_error"] for r in rows])
        except InsufficientData as e:
            logger.warning("compare summary: %s", e)
            rate = None
            warnings.append(f"no decay fit: {e}")

        ratios = {r["n"]: r["condition_ratio"] for r in rows if r["condition_ratio"] is not None}
        try:
            check_condition_decay(ratios)
        except ConditionViolated as e:
            logger.warning("compare summary: %s", e)
            warnings.append(str(e))
        return {"n": "summary", "rel_error": rate, "warnings": "; ".join(warnings)}
