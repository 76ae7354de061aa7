"""
Configuration models and file I/O for snorm.

This module defines the Pydantic models that map 1:1 to the external
JSON formats (diagonal models, norm families, weight rules) and to the
YAML run configuration, plus helpers that turn them into library objects.

Key models:
- GapSpec, TailSpec, ModelSpec: ``{"prefix":[...], "tail":{"kind", "alpha", "gap":{"c","d","q"}}}``
- PiRuleSpec: ``{"L", "c"}`` or ``{"prefix": [...]}``
- NormSpec: ``{"family", "k"?, "p"?, "pi"?, "pi_rule"?, "of"?}``
- Tolerances, RunConfig: one CLI invocation.

Key functions:
- load_model_file(path) / parse_model_json(text) -> DiagonalModel
- parse_norm_json(text) -> NormFamily
- read_matrix_csv(path) -> float64 ndarray
- parse_number_list("3,1,1/2") -> list[Fraction]
- load_run_config(path) / save_run_config(config, path): YAML round trip
- read_config_values(path): unvalidated YAML mapping for flag merging
- resolve_seed(config): applies the ``SNORM_SEED`` override

Numbers may be JSON numbers or rational strings ("1/2"). They become exact
``Fraction`` values; decimals are read through their shortest text form,
so 0.5 is 1/2.
"""

from __future__ import annotations

import json
import logging
import os
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Literal, Optional

import numpy as np
import pandas as pd
import yaml
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, ValidationError, model_validator

from snorm.exceptions import ParseError
from snorm.norms import NormFamily
from snorm.rationals import as_fraction, format_fraction
from snorm.sn_ideal import PiWeight
from snorm.spectra.models import DiagonalModel, Gap, TailKind, TailRule

logger = logging.getLogger(__name__)

SEED_ENV_VAR = "SNORM_SEED"
DEFAULT_SEED = 42


def _exact(value: object) -> Fraction:
    try:
        return as_fraction(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(str(exc)) from exc


Exact = Annotated[
    Fraction,
    BeforeValidator(_exact),
    PlainSerializer(format_fraction, return_type=str),
]


class _Spec(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid", populate_by_name=True)


# ---------------------------------------------------------------------------
# Diagonal models
# ---------------------------------------------------------------------------

class GapSpec(_Spec):
    """Gap function g(j) = c / (j + d)**q."""

    c: Exact = Field(..., description="Scale, > 0")
    d: Exact = Field(Fraction(0), description="Shift, >= 0")
    q: int = Field(1, ge=1, description="Integer exponent, >= 1")


class TailSpec(_Spec):
    """Tail rule of a diagonal model."""

    kind: Literal["constant", "above", "below"]
    alpha: Exact = Field(..., description="Limit of the entry stream, >= 0")
    gap: Optional[GapSpec] = Field(None, description="Required for 'above' and 'below' tails")

    @model_validator(mode="after")
    def _check_gap(self) -> TailSpec:
        if self.kind == "constant" and self.gap is not None:
            raise ValueError("A constant tail takes no gap")
        if self.kind != "constant" and self.gap is None:
            raise ValueError(f"A '{self.kind}' tail needs a gap {{c, d}}")
        return self

    def to_rule(self) -> TailRule:
        if self.gap is None:
            return TailRule.constant(self.alpha)
        return TailRule(TailKind(self.kind), self.alpha, Gap(self.gap.c, self.gap.d, self.gap.q))

    @classmethod
    def from_rule(cls, rule: TailRule) -> TailSpec:
        gap = None if rule.gap is None else GapSpec(c=rule.gap.c, d=rule.gap.d, q=rule.gap.q)
        return cls(kind=rule.kind.value, alpha=rule.alpha, gap=gap)


class ModelSpec(_Spec):
    """A positive diagonal operator model: finite prefix + structured tail."""

    name: Optional[str] = Field(None, description="Registry name (corpus files only)")
    description: str = Field("", description="Free-text description")
    prefix: list[Exact] = Field(default_factory=list, description="Leading entries, each >= 0")
    tail: TailSpec

    def to_model(self) -> DiagonalModel:
        return DiagonalModel(tuple(self.prefix), self.tail.to_rule())

    @classmethod
    def from_model(cls, model: DiagonalModel, name: str | None = None) -> ModelSpec:
        return cls(name=name, prefix=list(model.prefix), tail=TailSpec.from_rule(model.tail))


# ---------------------------------------------------------------------------
# Norm families
# ---------------------------------------------------------------------------

class PiRuleSpec(_Spec):
    """Weight sequence in Pi: the rule (L, c) or an explicit prefix."""

    L: Optional[Exact] = Field(None, description="Limit of the weights, in (0, 1)")
    c: Exact = Field(Fraction(1), description="Rule constant, >= 1")
    prefix: Optional[list[Exact]] = Field(None, description="Explicit nonincreasing weights starting at 1")

    @model_validator(mode="after")
    def _check_form(self) -> PiRuleSpec:
        if (self.L is None) == (self.prefix is None):
            raise ValueError("pi_rule takes exactly one of 'L' or 'prefix'")
        return self

    def to_weight(self) -> PiWeight:
        if self.prefix is not None:
            return PiWeight.from_prefix(self.prefix)
        return PiWeight.rule(self.L, self.c)


_NEEDS_K = {"kyfan", "wkyfan", "psingular"}


class NormSpec(_Spec):
    """JSON form of a NormFamily."""

    family: Literal["kyfan", "wkyfan", "psingular", "wl1", "min", "max", "dual"]
    k: Optional[int] = Field(None, ge=1)
    p: Optional[float] = Field(None, ge=1)
    pi: Optional[list[Exact]] = Field(None, description="Weights for wkyfan (or an explicit wl1 prefix)")
    pi_rule: Optional[PiRuleSpec] = Field(None, description="Weight rule for wl1")
    of: Optional[NormSpec] = Field(None, description="Inner family for 'dual'")

    @model_validator(mode="after")
    def _check_params(self) -> NormSpec:
        if self.family in _NEEDS_K and self.k is None:
            raise ValueError(f"Family '{self.family}' needs k")
        if self.family == "wkyfan" and not self.pi:
            raise ValueError("Family 'wkyfan' needs pi")
        if self.family == "psingular" and self.p is None:
            raise ValueError("Family 'psingular' needs p")
        if self.family == "dual" and self.of is None:
            raise ValueError("Family 'dual' needs 'of'")
        return self

    def to_family(self) -> NormFamily:
        if self.family == "kyfan":
            return NormFamily.kyfan(self.k)  # type: ignore[arg-type]
        if self.family == "wkyfan":
            return NormFamily.weighted_kyfan(self.pi, self.k)  # type: ignore[arg-type]
        if self.family == "psingular":
            return NormFamily.psingular(self.p, self.k)  # type: ignore[arg-type]
        if self.family == "wl1":
            if self.pi_rule is not None:
                return NormFamily.weighted_l1(self.pi_rule.to_weight())
            if self.pi:
                return NormFamily.weighted_l1(PiWeight.from_prefix(self.pi))
            return NormFamily.weighted_l1()
        if self.family == "min":
            return NormFamily.minimal()
        if self.family == "max":
            return NormFamily.maximal()
        assert self.of is not None
        return NormFamily.dual(self.of.to_family())


NormSpec.model_rebuild()


# ---------------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------------

class Tolerances(_Spec):
    """Numeric tolerances used by the verification suites."""

    residual: float = Field(1e-10, gt=0, description="Kernel residuals, relative to ||A||_F")
    attaining: float = Field(1e-9, gt=0, description="Attaining-set and certificate competitor slack")
    pairing: float = Field(1e-8, gt=0, description="Certificate pairing vs dual norm")
    agreement: float = Field(1e-7, gt=0, description="Closed-form vs numeric adjoint agreement")


Command = Literal["eval", "dual", "attain", "classify", "counterexample", "phistar", "verify"]


class RunConfig(_Spec):
    """One CLI invocation. Maps 1:1 to a run YAML file."""

    command: Command
    model: Optional[str] = Field(None, description="DiagonalModel JSON path or built-in corpus name")
    matrix: Optional[str] = Field(None, description="Path to a CSV matrix")
    norm: Optional[NormSpec] = None
    eta: Optional[list[Exact]] = Field(None, description="Spectrum for 'dual'")
    k: Optional[int] = Field(None, ge=1)
    pi: Optional[list[Exact]] = None
    p: Optional[float] = Field(None, ge=1)
    L: Exact = Field(Fraction(1, 2), description="Weight limit for counterexample/phistar")
    c: Exact = Field(Fraction(1), description="Weight rule constant")
    iterations: int = Field(50, ge=1)
    horizon: int = Field(500, ge=1)
    numeric: bool = False
    strict: bool = False
    suites: list[str] = Field(default_factory=lambda: ["all"])
    seed: int = Field(DEFAULT_SEED, ge=0, lt=2**64)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    output: Optional[str] = Field(None, description="Report path; stdout when unset")
    table_dir: Optional[str] = None
    table_format: Literal["csv", "parquet"] = "csv"
    timing: bool = False

    @model_validator(mode="after")
    def _check_inputs(self) -> RunConfig:
        if self.command in {"attain", "classify", "eval"} and not (self.model or self.matrix):
            raise ValueError(f"Command '{self.command}' needs --model or --matrix")
        if self.command == "eval" and self.norm is None:
            raise ValueError("Command 'eval' needs --norm")
        if self.command == "dual" and (self.norm is None or self.eta is None):
            raise ValueError("Command 'dual' needs --norm and --eta")
        if self.command == "phistar" and not self.model:
            raise ValueError("Command 'phistar' needs --model")
        return self


def resolve_seed(config: RunConfig, explicit: bool = False) -> RunConfig:
    """Apply ``SNORM_SEED`` unless the seed was given explicitly on the command line."""
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or explicit:
        return config
    try:
        seed = int(raw)
    except ValueError as exc:
        raise ParseError(f"{SEED_ENV_VAR}={raw!r} is not an integer") from exc
    logger.info("Seed %d taken from %s", seed, SEED_ENV_VAR)
    return config.model_copy(update={"seed": seed})


def read_config_values(path: str | Path) -> dict[str, object]:
    """Raw mapping from a run YAML file, before validation.

    The CLI merges these under its explicit flags, so a file may leave
    out fields (even ``command``) that the flags supply.
    """
    path = Path(path)
    if not path.exists():
        raise ParseError(f"Config file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        raw = yaml.safe_load(f)
    if raw is None:
        raise ParseError(f"Config file is empty: {path}")
    if not isinstance(raw, dict):
        raise ParseError(f"Config file must hold a mapping: {path}")
    return raw


def load_run_config(path: str | Path) -> RunConfig:
    """Load and validate a run YAML file.

    Raises:
        ParseError: If the file is missing, empty or fails validation.
    """
    raw = read_config_values(path)
    try:
        config = RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ParseError(f"Invalid run config {path}: {exc}") from exc
    logger.info("Loaded run config from %s", path)
    return config


def save_run_config(config: RunConfig, path: str | Path) -> None:
    """Serialize a RunConfig to YAML (rationals as "p/q" strings)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = config.model_dump(mode="json", exclude_none=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write("# snorm run configuration\n\n")
        yaml.dump(data, f, default_flow_style=False, sort_keys=False)
    logger.info("Saved run config to %s", path)


# ---------------------------------------------------------------------------
# Input files
# ---------------------------------------------------------------------------

def _load_json(text: str, what: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"Malformed {what} JSON: {exc}") from exc


def parse_model_json(text: str) -> DiagonalModel:
    raw = _load_json(text, "model")
    try:
        return ModelSpec.model_validate(raw).to_model()
    except ValidationError as exc:
        raise ParseError(f"Invalid model: {exc}") from exc


def load_model_file(path: str | Path) -> DiagonalModel:
    path = Path(path)
    if not path.exists():
        raise ParseError(f"Model file not found: {path}")
    model = parse_model_json(path.read_text(encoding="utf-8"))
    logger.info("Loaded model %s from %s", model.describe(), path)
    return model


def parse_norm_json(text: str) -> NormFamily:
    raw = _load_json(text, "norm family")
    try:
        return NormSpec.model_validate(raw).to_family()
    except ValidationError as exc:
        raise ParseError(f"Invalid norm family: {exc}") from exc


def parse_number_list(text: str) -> list[Fraction]:
    """Parse "3,1,1/2,0.25" into exact values."""
    try:
        return [as_fraction(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ParseError(f"Cannot parse number list {text!r}: {exc}") from exc


def read_matrix_csv(path: str | Path) -> np.ndarray:
    """Read a CSV matrix (one row per line, no header) as float64.

    Raises:
        ParseError: For a missing or empty file, ragged rows, or
            non-numeric / non-finite cells.
    """
    path = Path(path)
    if not path.exists():
        raise ParseError(f"Matrix file not found: {path}")
    try:
        df = pd.read_csv(path, header=None, skipinitialspace=True)
    except pd.errors.EmptyDataError as exc:
        raise ParseError(f"Matrix file is empty: {path}") from exc
    except pd.errors.ParserError as exc:
        raise ParseError(f"Ragged or malformed matrix {path}: {exc}") from exc
    try:
        values = df.to_numpy(dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"Non-numeric matrix entry in {path}: {exc}") from exc
    if not np.all(np.isfinite(values)):
        raise ParseError(f"Matrix {path} has missing, NaN or infinite entries")
    logger.info("Read %dx%d matrix from %s", values.shape[0], values.shape[1], path)
    return values
