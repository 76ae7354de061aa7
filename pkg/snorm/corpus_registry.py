"""
Model corpus loader and seeded generators for snorm.

Loads named diagonal models from the YAML files in snorm/corpus/ and
provides structured access via Pydantic models. Each file defines:
- group: identifier of the file's family of models
- description: free text
- models: a list of ModelSpec entries, each with a unique ``name``

New models are added by dropping a YAML file into the directory, with
no code changes.

The second half of the module generates seeded random corpora (models,
matrices, spectra, coordinate selections). All randomness flows through
``make_rng(seed)``, a ``numpy.random.Generator`` on the PCG64 bit
generator, so a seed fixes every corpus.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
import numpy.typing as npt
import yaml
from pydantic import BaseModel, Field

from snorm.config import ModelSpec
from snorm.exceptions import ParseError
from snorm.spectra.models import CoordinateSelection, DiagonalModel, TailRule

logger = logging.getLogger(__name__)

# Directory containing corpus YAML files (sibling package)
_CORPUS_DIR = Path(__file__).parent / "corpus"


class CorpusFile(BaseModel):
    """A corpus YAML file."""

    group: str
    description: str = ""
    models: list[ModelSpec] = Field(default_factory=list)


@dataclass(frozen=True)
class NamedModel:
    name: str
    group: str
    model: DiagonalModel
    description: str = ""


def load_corpus_file(path: Path) -> list[NamedModel]:
    """Load a single corpus YAML file."""
    with open(path, "r", encoding="utf-8") as f:
        raw = yaml.safe_load(f)
    corpus = CorpusFile.model_validate(raw)
    out: list[NamedModel] = []
    for spec in corpus.models:
        if not spec.name:
            raise ValueError(f"Unnamed model in {path.name}")
        out.append(NamedModel(spec.name, corpus.group, spec.to_model(), spec.description))
    return out


def load_builtin_corpus(corpus_dir: Path | None = None) -> list[NamedModel]:
    """Load all corpus YAML files, sorted by file name then model name.

    A file that fails to load is logged and skipped.
    """
    corpus_dir = corpus_dir or _CORPUS_DIR
    models: list[NamedModel] = []
    for yaml_path in sorted(corpus_dir.glob("*.yaml")):
        try:
            loaded = load_corpus_file(yaml_path)
        except Exception as e:
            logger.warning("Failed to load corpus file %s: %s", yaml_path, e)
            continue
        loaded.sort(key=lambda m: m.name)
        models.extend(loaded)
        logger.debug("Loaded %d model(s) from %s", len(loaded), yaml_path.name)
    logger.info("Loaded %d corpus models", len(models))
    return models


def get_model(name: str, corpus_dir: Path | None = None) -> DiagonalModel:
    """Look up a built-in model by name.

    Raises:
        ParseError: If no corpus model has that name.
    """
    corpus = load_builtin_corpus(corpus_dir)
    for named in corpus:
        if named.name == name:
            return named.model
    raise ParseError(f"Unknown corpus model '{name}'. Available: {sorted(m.name for m in corpus)}")


# ---------------------------------------------------------------------------
# Seeded generation
# ---------------------------------------------------------------------------

def make_rng(seed: int, stream: int | None = None) -> np.random.Generator:
    """PCG64 generator for *seed*; distinct *stream* values give independent generators."""
    if stream is None:
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


def _rational(rng: np.random.Generator, low: int, high: int, denominators: tuple[int, ...] = (1, 2, 4)) -> Fraction:
    den = int(rng.choice(denominators))
    return Fraction(int(rng.integers(low * den, high * den + 1)), den)


def _random_tail(rng: np.random.Generator, compact: bool) -> TailRule:
    alpha = Fraction(0) if compact else _rational(rng, 0, 3)
    kinds = ["constant", "above"] if compact or alpha == 0 else ["constant", "above", "below"]
    kind = str(rng.choice(kinds))
    if kind == "constant":
        return TailRule.constant(alpha)
    d = int(rng.integers(0, 3))
    q = int(rng.integers(1, 3))
    # a below tail must start at alpha - g(1) >= 0
    c_max = alpha * (1 + d) ** q if kind == "below" else Fraction(2)
    c = min(Fraction(int(rng.integers(1, 5)), 2), c_max)
    if kind == "below":
        return TailRule.below(alpha, c, d, q)
    return TailRule.above(alpha, c, d, q)


def random_models(
    rng: np.random.Generator,
    count: int,
    *,
    max_prefix: int = 4,
    compact: bool = False,
) -> list[DiagonalModel]:
    """Random models over all tail kinds (limit 0 only when *compact*).

    Prefix entries are small rationals; about a third of the models repeat
    a prefix value or place the tail's first value in the prefix, so that
    multiplicities above one occur.
    """
    models: list[DiagonalModel] = []
    for _ in range(count):
        tail = _random_tail(rng, compact)
        size = int(rng.integers(0, max_prefix + 1))
        prefix = [_rational(rng, 0, 6) for _ in range(size)]
        if prefix and rng.random() < 1 / 3:
            prefix.append(prefix[int(rng.integers(0, len(prefix)))])
        elif rng.random() < 1 / 4:
            prefix.append(tail.value(1))
        models.append(DiagonalModel(tuple(prefix), tail))
    logger.debug("Generated %d random models (compact=%s)", count, compact)
    return models


def _orthogonal(rng: np.random.Generator, n: int) -> npt.NDArray[np.float64]:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))


def random_matrices(
    rng: np.random.Generator,
    count: int,
    max_dim: int,
    *,
    square: bool = False,
) -> list[npt.NDArray[np.float64]]:
    """Random real matrices with dimensions in ``1..max_dim``.

    A quarter are built as ``U diag(s) V^T`` with repeated or zero
    singular values, which exercises multiplicity and rank handling.
    """
    out: list[npt.NDArray[np.float64]] = []
    for _ in range(count):
        m = int(rng.integers(1, max_dim + 1))
        n = m if square else int(rng.integers(1, max_dim + 1))
        if rng.random() < 0.25:
            r = min(m, n)
            base = np.sort(rng.uniform(0.5, 3.0, size=r))[::-1]
            s = np.repeat(base[: (r + 1) // 2], 2)[:r]
            if r > 1 and rng.random() < 0.5:
                s[-1] = 0.0
            sigma = np.zeros((m, n))
            sigma[:r, :r] = np.diag(s)
            out.append(_orthogonal(rng, m) @ sigma @ _orthogonal(rng, n).T)
        else:
            out.append(rng.standard_normal((m, n)))
    return out


def graded_matrices(
    rng: np.random.Generator,
    spectrum: tuple[float, ...],
    count: int,
) -> list[npt.NDArray[np.float64]]:
    """``count`` square matrices ``Q1 diag(spectrum) Q2^T`` with random orthogonal Q1, Q2.
    """
    n = len(spectrum)
    s = np.asarray(spectrum, dtype=np.float64)
    return [(_orthogonal(rng, n) * s) @ _orthogonal(rng, n).T for _ in range(count)]


def random_spectrum(rng: np.random.Generator, support_max: int = 5) -> npt.NDArray[np.float64]:
    """Nonincreasing nonnegative vector with support between 1 and *support_max*."""
    support = int(rng.integers(1, support_max + 1))
    return np.sort(rng.uniform(0.0, 1.0, size=support))[::-1].copy()


def sample_selections(rng: np.random.Generator, count: int, horizon: int) -> list[CoordinateSelection]:
    """Random legal model selections touching positions up to *horizon*."""
    out: list[CoordinateSelection] = []
    for _ in range(count):
        mask = rng.random(horizon) < 0.4
        drop = frozenset(int(j) + 1 for j in np.flatnonzero(mask))
        keep_from = int(rng.integers(1, horizon + 2)) if rng.random() < 0.3 else 1
        out.append(CoordinateSelection(drop=drop, keep_from=keep_from))
    return out
