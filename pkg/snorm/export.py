"""
Table exporter for snorm.

Writes verification tables to an output directory as CSV or Parquet,
one file per table: ``{output_dir}/{table_name}.{format}``.

``export_verify_tables`` writes the three tables of a verification run:

- ``suites``: one row per suite (checks, violations, pass flag, seconds)
- ``violations``: one row per failed check, possibly empty
- ``run``: a single row with the seed, corpus size and overall verdict

Key functions:
- export_tables(tables, output_dir, output_format) -> list[str]
- export_verify_tables(report, output_dir, output_format) -> list[str]
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING, Literal

import pandas as pd

from snorm.exceptions import ExportError
from snorm.report import suite_table, violation_table

if TYPE_CHECKING:
    from snorm.verify.runner import VerifyReport

logger = logging.getLogger(__name__)

TableFormat = Literal["csv", "parquet"]
_WRITERS = {
    "csv": lambda df, path: df.to_csv(path, index=False, encoding="utf-8"),
    "parquet": lambda df, path: df.to_parquet(path, index=False, engine="pyarrow"),
}


def export_tables(
    tables: dict[str, pd.DataFrame],
    output_dir: str | Path,
    output_format: TableFormat = "csv",
) -> list[str]:
    """Write each table to ``{output_dir}/{name}.{output_format}``.

    The directory is created if needed. Returns the written paths in the
    order of *tables*.

    Raises:
        ExportError: For an unsupported format, an unusable directory or
            a failed write.
    """
    writer = _WRITERS.get(output_format)
    if writer is None:
        raise ExportError(f"Unsupported output format: '{output_format}'. Supported formats: {sorted(_WRITERS)}")

    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ExportError(f"Cannot create output directory {out}: {exc}") from exc

    written: list[str] = []
    for name, df in tables.items():
        path = out / f"{name}.{output_format}"
        try:
            writer(df, path)
        except Exception as exc:
            raise ExportError(f"Failed to write {path.name} as {output_format}: {exc}") from exc
        written.append(str(path))
        logger.info("Exported table '%s' -> %s (%d rows)", name, path, len(df))
    return written


def export_verify_tables(
    report: VerifyReport,
    output_dir: str | Path,
    output_format: TableFormat = "csv",
) -> list[str]:
    """Write the ``suites``, ``violations`` and ``run`` tables of *report*."""
    suites = suite_table(report.suites)
    suites["seconds"] = [round(report.timing.get(name, 0.0), 6) for name in suites["suite"]]
    run = pd.DataFrame(
        [
            {
                "seed": str(report.seed),
                "corpus_size": report.corpus_size,
                "suites": len(report.suites),
                "checks": int(suites["checks"].sum()),
                "violations": int(suites["violations"].sum()),
                "passed": report.passed,
            }
        ]
    )
    return export_tables(
        {"suites": suites, "violations": violation_table(report.suites), "run": run},
        output_dir,
        output_format,
    )
