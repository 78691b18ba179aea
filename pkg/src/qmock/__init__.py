"""Exact q-series identities and high-precision mock-modular checks.

The exact layer (:mod:`cyclo`, :mod:`qseries`, :mod:`forms`, :mod:`joyce`,
:mod:`lerch`) works with rational and cyclotomic coefficients only; the
analytic layer (:mod:`numeric`) evaluates the same objects with mpmath.
"""
from __future__ import annotations

from .cyclo import CycloNum
from .joyce import CANONICAL_NORMALIZATION, JoyceParams, QRational
from .qseries import QSeries
from .report import IdentityReport

__all__ = ["CycloNum", "QSeries", "QRational", "JoyceParams", "IdentityReport",
           "CANONICAL_NORMALIZATION"]
__version__ = "0.1.0"
