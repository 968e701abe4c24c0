"""The ratio max_j |Delta~(j)/Delta| rho^{2n} over an n-range."""

from __future__ import annotations

import logging

from toeplitz_delta.asymptotics import check_condition_decay, condition_ratio, default_rho
from toeplitz_delta.errors import ConditionViolated, ConfigError
from toeplitz_delta.sweeps.base import BaseSweep, Row
from toeplitz_delta.sweeps.prepared import factorization

logger = logging.getLogger(__name__)


class ConditionSweep(BaseSweep):
    @property
    def name(self) -> str:
        return "condition"

    @property
    def columns(self) -> list[str]:
        return ["n", "condition_ratio", "warnings"]

    def check(self) -> None:
        if self.config.nu == 0:
            raise ConfigError("nu: the condition ratio needs a nonzero winding number")

    def _rho(self) -> float:
        if self.config.rho is not None:
            return self.config.rho
        return default_rho(factorization(self.config))

    def row(self, n: int) -> Row:
        cfg = self.config
        ratio = condition_ratio(factorization(cfg), cfg.nu, n, cfg.theta0, self._rho())
        return {"n": n, "condition_ratio": ratio, "warnings": ""}

    def summary(self, rows: list[Row]) -> Row | None:
        try:
            check_condition_decay({r["n"]: r["condition_ratio"] for r in rows})
        except ConditionViolated as e:
            logger.warning("condition sweep: %s", e)
            return {"n": "summary", "warnings": str(e)}
        return None
