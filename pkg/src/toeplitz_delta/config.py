"""Configuration loader with environment variable expansion, and the per-run settings."""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

import yaml

from toeplitz_delta.errors import ConfigError
from toeplitz_delta.symbol import (
    MAX_K,
    QUADRATURE_TOLERANCE,
    TAIL_TOLERANCE,
    AnnularSymbol,
    constant_symbol,
    correlation_factor,
    magnetization_factor,
)
from toeplitz_delta.toeplitz_core import MAX_DENSE_N

_ENV_VAR_PATTERN = re.compile(r"\$\{([^}]+)\}")

# Default config path relative to project root
_DEFAULT_CONFIG = Path(__file__).resolve().parent.parent.parent / "config" / "config.yaml"

SYMBOL_FAMILIES = ("unit", "magnetization", "correlation")
FORMATS = ("csv", "json")
MODES = ("correlation", "magnetization")
ZN_RULES = {"-2/N": -2.0, "-1/N": -1.0}

# (section, key) -> RunConfig field
_CONFIG_KEYS = {
    ("numerics", "tail_tolerance"): "tail_tolerance",
    ("numerics", "quadrature_tolerance"): "quadrature_tolerance",
    ("numerics", "max_K"): "max_K",
    ("symbol", "family"): "symbol",
    ("symbol", "lambda"): "lam",
    ("symbol", "nu"): "nu",
    ("symbol", "theta0"): "theta0",
    ("symbol", "zn"): "zn",
    ("sweep", "n_start"): "n_start",
    ("sweep", "n_stop"): "n_stop",
    ("sweep", "n_step"): "n_step",
    ("sweep", "jobs"): "jobs",
    ("sweep", "rho"): "rho",
    ("chain", "N"): "chain_length",
    ("chain", "alpha"): "alpha",
    ("chain", "q_index"): "q_index",
    ("chain", "mode"): "mode",
    ("output", "format"): "fmt",
    ("output", "path"): "out",
}

# Field names as they appear on the command line, for error messages
_FLAG_NAMES = {"lam": "lambda", "fmt": "format", "chain_length": "chain-length"}


def _expand_env_vars(value: Any) -> Any:
    """Recursively expand ${VAR} references in strings."""
    if isinstance(value, str):
        def _replace(match: re.Match) -> str:
            var_name = match.group(1)
            return os.environ.get(var_name, match.group(0))
        return _ENV_VAR_PATTERN.sub(_replace, value)
    if isinstance(value, dict):
        return {k: _expand_env_vars(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_expand_env_vars(item) for item in value]
    return value


def load_config(path: Path | str | None = None) -> dict[str, Any]:
    """Load YAML config, expanding environment variable references.

    Args:
        path: Path to config file. Defaults to config/config.yaml in the project root.

    Returns:
        Parsed configuration dictionary.

    Raises:
        FileNotFoundError: If the config file does not exist.
        ConfigError: If the file is not a YAML mapping.
    """
    config_path = Path(path) if path else _DEFAULT_CONFIG

    if not config_path.exists():
        # Fall back to example config if main config missing
        example = config_path.parent / "config.example.yaml"
        if example.exists():
            config_path = example
        else:
            raise FileNotFoundError(
                f"Config file not found: {config_path}\n"
                f"Copy config/config.example.yaml to config/config.yaml and adjust the sweep."
            )

    with open(config_path) as f:
        try:
            raw = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"{config_path}: invalid YAML: {e}") from e

    if raw is not None and not isinstance(raw, dict):
        raise ConfigError(f"{config_path}: top level must be a mapping")
    return _expand_env_vars(raw or {})


def parse_zn(rule: str | complex | float) -> str:
    """Normalize a z_n rule: '-2/N', '-1/N' or a complex literal such as '-0.3+0.2i'."""
    text = str(rule).strip().replace(" ", "")
    if text in ZN_RULES:
        return text
    try:
        complex(text.replace("i", "j"))
    except ValueError as e:
        raise ConfigError(f"zn must be a complex number, '-2/N' or '-1/N', got {rule!r}") from e
    return text


@dataclass(frozen=True)
class RunConfig:
    """Settings for one CLI run; flags override the YAML config."""

    command: str
    symbol: str = "unit"
    lam: float = 0.5
    nu: int = 0
    theta0: float = 0.0
    zn: str = "0"
    n_start: int = 1
    n_stop: int = 10
    n_step: int = 1
    jobs: int = 1
    rho: float | None = None
    fmt: str = "csv"
    out: str | None = None
    alpha: str = "x"
    chain_length: int | None = None
    q_index: int = 0
    mode: str = "correlation"
    tail_tolerance: float = TAIL_TOLERANCE
    quadrature_tolerance: float = QUADRATURE_TOLERANCE
    max_K: int = MAX_K

    @classmethod
    def from_sources(cls, command: str, cfg: dict[str, Any] | None = None, **flags) -> RunConfig:
        """Merge config sections with flag values; flags that are not None win.

        Raises:
            ConfigError: Naming the offending field when a value is malformed or out of range.
        """
        values: dict[str, Any] = {}
        for (section, key), name in _CONFIG_KEYS.items():
            block = (cfg or {}).get(section) or {}
            if not isinstance(block, dict):
                raise ConfigError(f"config section '{section}' must be a mapping")
            if key in block and block[key] is not None:
                values[name] = block[key]

        known = {f.name for f in fields(cls)}
        for name, value in flags.items():
            if name not in known:
                raise ConfigError(f"unknown setting '{name}'")
            if value is not None:
                values[name] = value

        return cls(command=command, **_coerce(values)).validated()

    def validated(self) -> RunConfig:
        def fail(name: str, message: str):
            raise ConfigError(f"{_FLAG_NAMES.get(name, name)}: {message}")

        if self.symbol not in SYMBOL_FAMILIES:
            fail("symbol", f"must be one of {', '.join(SYMBOL_FAMILIES)}, got {self.symbol!r}")
        needs_lambda = self.symbol != "unit" or self.command == "xy"
        if needs_lambda and not 0.0 < self.lam < 1.0:
            fail("lam", f"must lie in (0, 1), got {self.lam}")
        if not 0.0 <= self.theta0 < 2 * math.pi:
            fail("theta0", f"must lie in [0, 2pi), got {self.theta0}")
        if self.n_start < 1 or self.n_step < 1 or self.n_stop < self.n_start:
            fail("n_start", f"n-range {self.n_start}..{self.n_stop} step {self.n_step} is empty")
        if self.command != "condition" and self.n_stop > MAX_DENSE_N:
            fail("n_stop", f"must be <= {MAX_DENSE_N} for the dense LU, got {self.n_stop}")
        if self.jobs < 1:
            fail("jobs", f"must be >= 1, got {self.jobs}")
        if self.rho is not None and not 0.0 < self.rho < 1.0:
            fail("rho", f"must lie in (0, 1), got {self.rho}")
        if self.fmt not in FORMATS:
            fail("fmt", f"must be csv or json, got {self.fmt!r}")
        if self.alpha not in ("x", "y"):
            fail("alpha", f"must be x or y, got {self.alpha!r}")
        if self.mode not in MODES:
            fail("mode", f"must be correlation or magnetization, got {self.mode!r}")
        if self.chain_length is not None and (self.chain_length < 3 or self.chain_length % 2 == 0):
            fail("chain_length", f"must be odd and >= 3, got {self.chain_length}")
        if self.mode == "magnetization" and (self.chain_length or 0) > 2 * MAX_DENSE_N + 1:
            fail("chain_length", f"must be <= {2 * MAX_DENSE_N + 1} for the dense LU")
        if not 0 < self.tail_tolerance < 1 or not 0 < self.quadrature_tolerance < 1:
            fail("tail_tolerance", "tolerances must lie in (0, 1)")
        parse_zn(self.zn)
        return self

    def n_values(self) -> list[int]:
        """The n-range, stop inclusive."""
        return list(range(self.n_start, self.n_stop + 1, self.n_step))

    def z_n(self, n: int) -> complex:
        """Delta weight at rank n; the N-rules use N = 2n + 1."""
        if self.zn in ZN_RULES:
            return complex(ZN_RULES[self.zn] / (2 * n + 1))
        return complex(self.zn.replace("i", "j"))

    @property
    def tolerances(self) -> dict[str, float]:
        return {
            "tail_tolerance": self.tail_tolerance,
            "quadrature_tolerance": self.quadrature_tolerance,
            "max_K": self.max_K,
        }

    def factor_symbol(self) -> AnnularSymbol:
        """The zero-winding factor a of the configured family."""
        if self.symbol == "magnetization":
            return magnetization_factor(self.lam)
        if self.symbol == "correlation":
            return correlation_factor(self.lam)
        return constant_symbol(1.0)

    def build_symbol(self) -> AnnularSymbol:
        """f = a z^nu."""
        return self.factor_symbol().times_power(self.nu)


_INT_FIELDS = {"nu", "n_start", "n_stop", "n_step", "jobs", "q_index", "chain_length", "max_K"}
_FLOAT_FIELDS = {"lam", "theta0", "rho", "tail_tolerance", "quadrature_tolerance"}
_STR_FIELDS = {"symbol", "zn", "fmt", "out", "alpha", "mode"}


def _coerce(values: dict[str, Any]) -> dict[str, Any]:
    """Convert YAML/flag values to field types, raising ConfigError naming the field."""
    out: dict[str, Any] = {}
    for name, value in values.items():
        label = _FLAG_NAMES.get(name, name)
        try:
            if name in _INT_FIELDS:
                if isinstance(value, float) and not value.is_integer():
                    raise ValueError(value)
                out[name] = int(value)
            elif name in _FLOAT_FIELDS:
                out[name] = float(value)
            elif name == "zn":
                out[name] = parse_zn(value)
            elif name in _STR_FIELDS:
                out[name] = str(value)
            else:
                out[name] = value
        except (TypeError, ValueError) as e:
            raise ConfigError(f"{label}: cannot interpret {value!r}") from e
    return out
