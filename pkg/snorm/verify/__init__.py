"""
Verification suites for snorm.

``verify_all(seed)`` runs every invariant suite and returns a
``VerifyReport``; individual suites live in the ``*_checks`` modules and
take a ``SuiteContext``.
"""

from snorm.verify.base import SuiteContext
from snorm.verify.runner import SUITES, VerifyReport, default_corpus, verify_all

__all__ = ["SUITES", "SuiteContext", "VerifyReport", "default_corpus", "verify_all"]
