"""Frustrated XY ring observables: exact against closed-form asymptotics."""

from __future__ import annotations

import math

from toeplitz_delta.errors import ConfigError, ParameterError
from toeplitz_delta.sweeps.base import BaseSweep, Row
from toeplitz_delta.xy_chain import (
    ChainParams,
    correlation_asymptotic,
    correlation_exact,
    magnetization_asymptotic,
    magnetization_exact,
)


class XYSweep(BaseSweep):
    """Correlation mode sweeps the distance n on a ring of fixed N.

    Magnetization mode sweeps N = 2n + 1 over the n-range, or evaluates the single
    ring given by --chain-length.
    """

    @property
    def name(self) -> str:
        return "xy"

    @property
    def columns(self) -> list[str]:
        return ["N", "n", "q", "alpha", "exact", "asymptotic", "rel_error"]

    def tasks(self) -> list[tuple[int, int]]:
        cfg = self.config
        if cfg.mode == "magnetization":
            if cfg.chain_length is not None:
                return [(cfg.chain_length, (cfg.chain_length - 1) // 2)]
            return [(2 * n + 1, n) for n in cfg.n_values()]
        return [(cfg.chain_length, n) for n in cfg.n_values()]

    def check(self) -> None:
        cfg = self.config
        if cfg.mode == "correlation":
            if cfg.chain_length is None:
                raise ConfigError("chain-length: required in correlation mode")
            for N, n in self.tasks():
                if not n < N / 2:
                    raise ParameterError(f"n={n} must be below N/2 = {N / 2}")
        for N, _ in self.tasks():
            self._params(N)

    def _params(self, N: int) -> ChainParams:
        cfg = self.config
        return ChainParams.from_index(cfg.lam, N, cfg.q_index, cfg.alpha)

    def row(self, task: tuple[int, int]) -> Row:
        N, n = task
        params = self._params(N)
        if self.config.mode == "magnetization":
            exact = magnetization_exact(params)
            asymptotic = magnetization_asymptotic(params)
        else:
            exact = correlation_exact(params, n)
            asymptotic = correlation_asymptotic(params, n) if n >= 2 else None

        if asymptotic is None:
            rel_error = None
        elif exact != 0:
            rel_error = abs(exact - asymptotic) / abs(exact)
        else:
            rel_error = math.inf
        return {
            "N": N,
            "n": n,
            "q": params.q,
            "alpha": params.alpha,
            "exact": exact,
            "asymptotic": asymptotic,
            "rel_error": rel_error,
        }
