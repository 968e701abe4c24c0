"""Base sweep interface."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Any, Iterator

from toeplitz_delta.config import RunConfig
from toeplitz_delta.errors import ConfigError, ParameterError

logger = logging.getLogger(__name__)

Row = dict[str, Any]


@dataclass
class SweepTable:
    """Rows of one sweep plus an optional summary row and the error that stopped it."""

    command: str
    columns: list[str]
    rows: list[Row] = field(default_factory=list)
    summary: Row | None = None
    error: str | None = None
    failure: Exception | None = field(default=None, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def bad_parameters(self) -> bool:
        """The sweep stopped on a parameter or config error rather than a numerical one."""
        return isinstance(self.failure, (ParameterError, ConfigError))


class BaseSweep(ABC):
    """Abstract base class for all sweeps.

    A sweep maps each task (usually a matrix rank n) to one table row. Only the
    RunConfig is stored on the instance so rows can be computed in worker processes.
    """

    def __init__(self, config: RunConfig):
        self.config = config

    @property
    @abstractmethod
    def name(self) -> str:
        """Command name (e.g. 'det', 'compare')."""
        ...

    @property
    @abstractmethod
    def columns(self) -> list[str]:
        ...

    @abstractmethod
    def row(self, task: Any) -> Row:
        """Compute one row. Raises NumericError on numerical failure."""
        ...

    def tasks(self) -> list[Any]:
        return self.config.n_values()

    def check(self) -> None:
        """Validate the sweep before any row runs. Override to add range rules."""

    def summary(self, rows: list[Row]) -> Row | None:
        """Optional trailing row computed from the finished rows."""
        return None

    def iter_rows(self) -> Iterator[Row]:
        """Yield rows in task order, in a worker pool when jobs > 1."""
        tasks = self.tasks()
        jobs = min(self.config.jobs, len(tasks))
        if jobs <= 1:
            for task in tasks:
                yield self.row(task)
            return
        with Pool(processes=jobs) as pool:
            yield from pool.imap(self.row, tasks)

    def safe_run(self) -> SweepTable:
        """Run the sweep, keeping the rows produced before any failure.

        check() errors propagate; errors raised by a row are recorded on the table.
        """
        self.check()
        table = SweepTable(command=self.name, columns=list(self.columns))
        try:
            for row in self.iter_rows():
                table.rows.append(row)
                logger.info("%s: row %s done", self.name, row.get(self.columns[0]))
        except Exception as e:
            logger.exception("Sweep '%s' failed after %d rows", self.name, len(table.rows))
            table.error = f"{type(e).__name__}: {e}"
            table.failure = e
            return table
        table.summary = self.summary(table.rows)
        return table
