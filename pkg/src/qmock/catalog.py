"""Registry of exact identities and the common verification entry point."""
from __future__ import annotations

from fractions import Fraction

from . import forms, lerch
from .joyce import CANONICAL_NORMALIZATION, duality_check
from .report import IdentityReport, compare_through

IDENTITIES = {**forms.CATALOG, **lerch.CATALOG}
EXTRA_IDENTITIES = dict(lerch.EXTRA_CATALOG)
DUALITY_KS = (2, 4, 6)


def identity_ids(include_extra: bool = False) -> list[str]:
    ids = list(IDENTITIES)
    if include_extra:
        ids += list(EXTRA_IDENTITIES)
    return ids


def verify_identity(ident: str, order=40, k: int | None = None,
                    normalization: str = CANONICAL_NORMALIZATION) -> IdentityReport:
    """Check one identity on every exponent up to and including ``order``.

    ``DUALITY`` additionally takes the even weight ``k``.
    """
    order = Fraction(order)
    if ident == "DUALITY":
        if k is None:
            raise ValueError("DUALITY needs an even weight k")
        return duality_check(k, order, normalization)
    builder = IDENTITIES.get(ident) or EXTRA_IDENTITIES.get(ident)
    if builder is None:
        raise ValueError(f"unknown identity {ident!r}")
    lhs, rhs = builder(order)
    return compare_through(ident, lhs, rhs, order)


def verify_all(order=40, include_extra: bool = False) -> list[IdentityReport]:
    reports = [verify_identity(i, order) for i in identity_ids(include_extra)]
    return reports
