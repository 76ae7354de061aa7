"""
Shared state for the verification suites.

Each suite is a function ``SuiteContext -> SuiteResult``. The context
carries the seed, the model corpus and the tolerances; ``ctx.rng(name)``
hands every suite its own generator stream so that running a subset of
suites does not change what any one suite samples.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from snorm.config import Tolerances
from snorm.corpus_registry import make_rng
from snorm.duality import adjoint_closed_form
from snorm.norms import NormFamily, SpectrumVector, Value
from snorm.report import SuiteResult
from snorm.spectra.models import DiagonalModel

ClosedForm = Callable[[NormFamily, SpectrumVector], Value]


@dataclass
class SuiteContext:
    seed: int
    models: list[DiagonalModel] = field(default_factory=list)
    tolerances: Tolerances = field(default_factory=Tolerances)
    closed_form: ClosedForm = adjoint_closed_form

    def rng(self, stream: str) -> np.random.Generator:
        return make_rng(self.seed, zlib.crc32(stream.encode("utf-8")))


Suite = Callable[[SuiteContext], SuiteResult]
