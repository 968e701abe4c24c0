"""CLI entry point using Typer."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import typer

from toeplitz_delta.config import RunConfig, load_config
from toeplitz_delta.errors import ConfigError, ParameterError

app = typer.Typer(
    name="toeplitz-delta",
    help="Toeplitz determinants with a delta-function singularity: exact vs asymptotic sweeps.",
    no_args_is_help=True,
)

EXIT_CONFIG = 2
EXIT_NUMERIC = 3

# Sweep registry: command name to class
_SWEEP_CLASSES = {}


def _register_sweeps():
    """Lazily import and register the sweeps."""
    if _SWEEP_CLASSES:
        return
    from toeplitz_delta.sweeps.compare import CompareSweep
    from toeplitz_delta.sweeps.condition import ConditionSweep
    from toeplitz_delta.sweeps.det import DetSweep
    from toeplitz_delta.sweeps.xy import XYSweep

    _SWEEP_CLASSES["det"] = DetSweep
    _SWEEP_CLASSES["compare"] = CompareSweep
    _SWEEP_CLASSES["xy"] = XYSweep
    _SWEEP_CLASSES["condition"] = ConditionSweep


def _setup_logging(verbose: bool = False):
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
    )


def _run(command: str, config_path: Optional[Path], verbose: bool, **flags):
    """Build the RunConfig, run the sweep and write its table."""
    _setup_logging(verbose)
    logger = logging.getLogger("toeplitz_delta")

    try:
        cfg = load_config(config_path)
    except FileNotFoundError as e:
        if config_path is not None:
            typer.echo(f"Config error: {e}", err=True)
            raise typer.Exit(EXIT_CONFIG)
        logger.info("No config file found; using built-in defaults")
        cfg = {}
    except ConfigError as e:
        typer.echo(f"Config error: {e}", err=True)
        raise typer.Exit(EXIT_CONFIG)

    _register_sweeps()
    try:
        run_cfg = RunConfig.from_sources(command, cfg, **flags)
        table = _SWEEP_CLASSES[command](run_cfg).safe_run()
    except (ConfigError, ParameterError) as e:
        typer.echo(f"Config error: {e}", err=True)
        raise typer.Exit(EXIT_CONFIG)

    # Rows produced before a failure are still written
    from toeplitz_delta.report.exporter import export_table
    text = export_table(table, run_cfg.out, run_cfg.fmt)
    if run_cfg.out is None:
        typer.echo(text, nl=False)
    else:
        typer.echo(f"{len(table.rows)} rows written to {run_cfg.out}", err=True)

    if table.bad_parameters:
        typer.echo(f"Config error: {table.error}", err=True)
        raise typer.Exit(EXIT_CONFIG)
    if not table.ok:
        typer.echo(f"Numeric failure: {table.error}", err=True)
        raise typer.Exit(EXIT_NUMERIC)


@app.command()
def det(
    symbol: Optional[str] = typer.Option(
        None, "--symbol", help="Symbol family: unit, magnetization or correlation.",
    ),
    lam: Optional[float] = typer.Option(None, "--lambda", help="Anisotropy lambda in (0, 1)."),
    nu: Optional[int] = typer.Option(None, "--nu", help="Winding number: f = a z^nu."),
    theta0: Optional[float] = typer.Option(None, "--theta0", help="Delta position in [0, 2pi)."),
    zn: Optional[str] = typer.Option(
        None, "--zn", help="Delta weight: complex literal, '-2/N' or '-1/N' (N = 2n+1).",
    ),
    n_start: Optional[int] = typer.Option(None, "--n-start", help="First matrix rank."),
    n_stop: Optional[int] = typer.Option(None, "--n-stop", help="Last matrix rank (inclusive)."),
    n_step: Optional[int] = typer.Option(None, "--n-step", help="Rank increment."),
    fmt: Optional[str] = typer.Option(None, "--format", help="Output format: csv or json."),
    out: Optional[str] = typer.Option(None, "--out", help="Output file. Defaults to stdout."),
    jobs: Optional[int] = typer.Option(None, "--jobs", help="Worker processes."),
    config_path: Optional[Path] = typer.Option(
        None, "--config", "-c",
        help="Path to config file.",
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
):
    """Exact determinants of the delta-modified Toeplitz matrix."""
    _run(
        "det", config_path, verbose,
        symbol=symbol, lam=lam, nu=nu, theta0=theta0, zn=zn,
        n_start=n_start, n_stop=n_stop, n_step=n_step, fmt=fmt, out=out, jobs=jobs,
    )


@app.command()
def compare(
    symbol: Optional[str] = typer.Option(
        None, "--symbol", help="Symbol family: unit, magnetization or correlation.",
    ),
    lam: Optional[float] = typer.Option(None, "--lambda", help="Anisotropy lambda in (0, 1)."),
    nu: Optional[int] = typer.Option(None, "--nu", help="Winding number: f = a z^nu."),
    theta0: Optional[float] = typer.Option(None, "--theta0", help="Delta position in [0, 2pi)."),
    zn: Optional[str] = typer.Option(
        None, "--zn", help="Delta weight: complex literal, '-2/N' or '-1/N' (N = 2n+1).",
    ),
    n_start: Optional[int] = typer.Option(None, "--n-start", help="First matrix rank."),
    n_stop: Optional[int] = typer.Option(None, "--n-stop", help="Last matrix rank (inclusive)."),
    n_step: Optional[int] = typer.Option(None, "--n-step", help="Rank increment."),
    rho: Optional[float] = typer.Option(
        None, "--rho", help="Decay radius for the condition ratio.",
    ),
    fmt: Optional[str] = typer.Option(None, "--format", help="Output format: csv or json."),
    out: Optional[str] = typer.Option(None, "--out", help="Output file. Defaults to stdout."),
    jobs: Optional[int] = typer.Option(None, "--jobs", help="Worker processes."),
    config_path: Optional[Path] = typer.Option(
        None, "--config", "-c",
        help="Path to config file.",
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
):
    """Exact determinants against the large-n formulas, with a fitted error rate."""
    _run(
        "compare", config_path, verbose,
        symbol=symbol, lam=lam, nu=nu, theta0=theta0, zn=zn, rho=rho,
        n_start=n_start, n_stop=n_stop, n_step=n_step, fmt=fmt, out=out, jobs=jobs,
    )


@app.command()
def xy(
    lam: Optional[float] = typer.Option(None, "--lambda", help="Anisotropy lambda in (0, 1)."),
    alpha: Optional[str] = typer.Option(None, "--alpha", help="Spin axis: x or y."),
    chain_length: Optional[int] = typer.Option(
        None, "--chain-length", help="Odd ring length N.",
    ),
    q_index: Optional[int] = typer.Option(None, "--q-index", help="Momentum q = 2 pi j / N."),
    mode: Optional[str] = typer.Option(
        None, "--mode", help="correlation or magnetization.",
    ),
    n_start: Optional[int] = typer.Option(None, "--n-start", help="First distance n."),
    n_stop: Optional[int] = typer.Option(None, "--n-stop", help="Last distance n (inclusive)."),
    n_step: Optional[int] = typer.Option(None, "--n-step", help="Distance increment."),
    fmt: Optional[str] = typer.Option(None, "--format", help="Output format: csv or json."),
    out: Optional[str] = typer.Option(None, "--out", help="Output file. Defaults to stdout."),
    jobs: Optional[int] = typer.Option(None, "--jobs", help="Worker processes."),
    config_path: Optional[Path] = typer.Option(
        None, "--config", "-c",
        help="Path to config file.",
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
):
    """Frustrated XY ring correlations and magnetizations, exact vs asymptotic."""
    _run(
        "xy", config_path, verbose,
        lam=lam, alpha=alpha, chain_length=chain_length, q_index=q_index, mode=mode,
        n_start=n_start, n_stop=n_stop, n_step=n_step, fmt=fmt, out=out, jobs=jobs,
    )


@app.command()
def condition(
    symbol: Optional[str] = typer.Option(
        None, "--symbol", help="Symbol family: unit, magnetization or correlation.",
    ),
    lam: Optional[float] = typer.Option(None, "--lambda", help="Anisotropy lambda in (0, 1)."),
    nu: Optional[int] = typer.Option(None, "--nu", help="Winding number: f = a z^nu."),
    theta0: Optional[float] = typer.Option(None, "--theta0", help="Delta position in [0, 2pi)."),
    rho: Optional[float] = typer.Option(None, "--rho", help="Decay radius rho in (0, 1)."),
    n_start: Optional[int] = typer.Option(None, "--n-start", help="First matrix rank."),
    n_stop: Optional[int] = typer.Option(None, "--n-stop", help="Last matrix rank (inclusive)."),
    n_step: Optional[int] = typer.Option(None, "--n-step", help="Rank increment."),
    fmt: Optional[str] = typer.Option(None, "--format", help="Output format: csv or json."),
    out: Optional[str] = typer.Option(None, "--out", help="Output file. Defaults to stdout."),
    jobs: Optional[int] = typer.Option(None, "--jobs", help="Worker processes."),
    config_path: Optional[Path] = typer.Option(
        None, "--config", "-c",
        help="Path to config file.",
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v"),
):
    """The ratio max |Delta~/Delta| rho^{2n} along an n-sweep."""
    _run(
        "condition", config_path, verbose,
        symbol=symbol, lam=lam, nu=nu, theta0=theta0, rho=rho,
        n_start=n_start, n_stop=n_stop, n_step=n_step, fmt=fmt, out=out, jobs=jobs,
    )

