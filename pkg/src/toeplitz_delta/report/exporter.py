"""Write sweep tables as CSV or JSON."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any

from toeplitz_delta.sweeps.base import SweepTable

logger = logging.getLogger(__name__)

FLOAT_FORMAT = ".17g"


def format_value(value: Any) -> str:
    """CSV cell text; floats keep 17 significant digits, None is empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def to_csv(table: SweepTable) -> str:
    """Header row, one line per row, then the summary row if any; '\\n' line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    rows = table.rows + ([table.summary] if table.summary else [])
    for row in rows:
        writer.writerow([format_value(row.get(col)) for col in table.columns])
    return buffer.getvalue()


def to_document(table: SweepTable) -> dict[str, Any]:
    """The JSON document {command, columns, rows, summary}; non-finite floats become null."""
    return {
        "command": table.command,
        "columns": table.columns,
        "rows": [{col: _json_value(row.get(col)) for col in table.columns} for row in table.rows],
        "summary": (
            {k: _json_value(v) for k, v in table.summary.items()} if table.summary else None
        ),
    }


def to_json(table: SweepTable) -> str:
    return json.dumps(to_document(table), indent=2, sort_keys=True) + "\n"


def export_table(table: SweepTable, path: Path | str | None = None, fmt: str = "csv") -> str:
    """Render a table and write it to path when given.

    Args:
        table: The sweep output.
        path: Destination file; parent directories are created.
        fmt: 'csv' or 'json'.

    Returns:
        The rendered text.

    Raises:
        ValueError: If fmt is not csv or json.
    """
    if fmt == "csv":
        text = to_csv(table)
    elif fmt == "json":
        text = to_json(table)
    else:
        raise ValueError(f"Unknown format: {fmt}")

    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="")
        logger.info("Wrote %d rows → %s", len(table.rows), path)
    return text
