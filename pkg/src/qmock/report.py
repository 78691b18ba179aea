"""Machine-readable verdicts for exact identity checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .qseries import QSeries, _fstr


@dataclass(frozen=True)
class Mismatch:
    exponent: Fraction
    lhs: object
    rhs: object

    def to_json(self) -> dict:
        return {"exponent": _fstr(self.exponent), "lhs": _value_json(self.lhs),
                "rhs": _value_json(self.rhs)}


@dataclass(frozen=True)
class IdentityReport:
    id: str
    order: Fraction
    passed: bool
    first_mismatch: Mismatch | None = None
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "order": _fstr(self.order),
            "pass": self.passed,
            "first_mismatch": None if self.first_mismatch is None else self.first_mismatch.to_json(),
        }
        if self.notes:
            out["notes"] = self.notes
        return out

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        text = f"{verdict} {self.id} (order {_fstr(self.order)})"
        if self.first_mismatch is not None:
            m = self.first_mismatch
            text += f": first mismatch at q^{_fstr(m.exponent)}: {m.lhs} != {m.rhs}"
        return text


def _value_json(v):
    if hasattr(v, "to_json"):
        return v.to_json()
    if isinstance(v, Fraction):
        return _fstr(v)
    return str(v)


def compare_series(ident: str, lhs: QSeries, rhs: QSeries, order, notes=None) -> IdentityReport:
    """Compare two series on every exponent below ``order``.

    Both sides must be known below ``order``; a side that is truncated too
    early raises instead of being compared against fabricated zeros.
    """
    order = Fraction(order)
    m = lhs.first_mismatch(rhs, order)
    mismatch = None if m is None else Mismatch(*m)
    return IdentityReport(ident, order, m is None, mismatch, notes or {})


def compare_through(ident: str, lhs: QSeries, rhs: QSeries, order, notes=None) -> IdentityReport:
    """Compare every exponent ``<= order``; both sides must be known past it."""
    order = Fraction(order)
    d = lcm(lhs.d, rhs.d)
    limit = order + Fraction(1, 2 * d)
    m = lhs.first_mismatch(rhs, limit)
    mismatch = None if m is None else Mismatch(*m)
    return IdentityReport(ident, order, m is None, mismatch, notes or {})
