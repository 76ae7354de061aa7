"""
Report assembly for snorm.

Every CLI command emits one JSON report. The report is DESCRIPTIVE: it
echoes the inputs (including the norm-family parameters), the results,
and the provenance of each formula (closed-form, numeric, bidual, ...).

Exactness survives serialization: ``Fraction`` values are written as
``"p/q"`` strings (``"p"`` for integers). Keys are sorted and numpy
values converted, so a fixed seed gives byte-identical output.

Suite results also flatten into pandas tables (one row per suite, one
row per violation) for CSV/Parquet export through ``snorm.export``.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable

import numpy as np
import pandas as pd

from snorm.rationals import format_fraction

SCHEMA_VERSION = "1.0"


# ---------------------------------------------------------------------------
# Suite results
# ---------------------------------------------------------------------------

@dataclass
class Violation:
    """One failed check: the item it concerns, what failed, and a witness."""

    item: str
    detail: str
    witness: Any = None


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def check(self, ok: bool, item: str, detail: str, witness: Any = None) -> bool:
        """Count one check, recording a violation when *ok* is false."""
        self.checks += 1
        if not ok:
            self.violations.append(Violation(item, detail, witness))
        return ok

    def extend(self, other: SuiteResult) -> None:
        self.checks += other.checks
        self.violations.extend(other.violations)


# ---------------------------------------------------------------------------
# JSON encoding
# ---------------------------------------------------------------------------

def to_jsonable(obj: Any) -> Any:
    """Recursively convert *obj* into JSON-compatible primitives."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        if isinstance(obj, SuiteResult):
            out["passed"] = obj.passed
        return out
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return sorted(to_jsonable(x) for x in obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if hasattr(obj, "describe"):
        return obj.describe()
    return str(obj)


def build_report(
    command: str,
    inputs: dict[str, Any],
    results: Any,
    provenance: dict[str, Any] | None = None,
    timing: dict[str, float] | None = None,
) -> dict[str, Any]:
    """Assemble the report envelope; *timing* is included only when given."""
    report: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": to_jsonable(inputs),
        "results": to_jsonable(results),
        "provenance": to_jsonable(provenance or {}),
    }
    if timing is not None:
        report["timing"] = {k: round(v, 6) for k, v in timing.items()}
    return report


def dump_report(payload: dict[str, Any]) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

_SUITE_COLUMNS = ["suite", "checks", "violations", "passed"]
_VIOLATION_COLUMNS = ["suite", "item", "detail", "witness"]


def suite_table(results: Iterable[SuiteResult]) -> pd.DataFrame:
    """One row per suite: name, check count, violation count, pass flag."""
    rows = [
        {
            "suite": r.name,
            "checks": r.checks,
            "violations": len(r.violations),
            "passed": r.passed,
        }
        for r in results
    ]
    return pd.DataFrame(rows, columns=_SUITE_COLUMNS)


def violation_table(results: Iterable[SuiteResult]) -> pd.DataFrame:
    """One row per violation; witnesses are stored as compact JSON text."""
    rows = [
        {
            "suite": r.name,
            "item": v.item,
            "detail": v.detail,
            "witness": json.dumps(to_jsonable(v.witness), sort_keys=True),
        }
        for r in results
        for v in r.violations
    ]
    return pd.DataFrame(rows, columns=_VIOLATION_COLUMNS)
