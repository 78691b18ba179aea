"""Per-precision mpmath contexts.

Every numerical routine takes its precision explicitly and works inside a
private :class:`mpmath.MPContext`; the global ``mpmath.mp`` is never touched.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath

#: Extra decimal digits carried internally on top of the requested precision.
GUARD_DIGITS = 10


@lru_cache(maxsize=None)
def context(prec: int) -> mpmath.MPContext:
    """Return an isolated context working at ``prec + GUARD_DIGITS`` digits."""
    if prec < 10:
        raise ValueError(f"precision must be at least 10 digits, got {prec}")
    ctx = mpmath.MPContext()
    ctx.dps = prec + GUARD_DIGITS
    return ctx


def to_mpf(ctx: mpmath.MPContext, x: Fraction | int):
    x = Fraction(x)
    if x.denominator == 1:
        return ctx.mpf(x.numerator)
    return ctx.mpf(x.numerator) / x.denominator
