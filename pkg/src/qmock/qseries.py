"""Truncated Puiseux series in q with exponents on a lattice (1/d)Z.

A :class:`QSeries` knows every coefficient of ``q**r`` for ``r < truncation``
and nothing at or above it.  Every operation propagates the truncation it can
justify; coefficients past the truncation are never padded with zeros.
"""
from __future__ import annotations

import csv
import io
from fractions import Fraction
from math import ceil, gcd, lcm

from .cyclo import DEFAULT_ORDER, CycloNum
from .errors import DegenerateSeriesError, TruncationError, UnsupportedSubstitutionError

Scalar = (int, Fraction, CycloNum)


class QSeries:
    """Immutable truncated series ``sum c_k q^(k/d) + O(q^truncation)``."""

    __slots__ = ("d", "terms", "truncation", "order")

    def __init__(self, terms: dict[int, object], d: int = 1, truncation=0,
                 order: int = DEFAULT_ORDER):
        if d < 1:
            raise ValueError("lattice denominator must be positive")
        truncation = Fraction(truncation)
        self.d = d
        self.truncation = truncation
        self.order = order
        kept = {}
        for k, c in terms.items():
            if Fraction(k, d) >= truncation:
                continue
            if not isinstance(c, CycloNum):
                c = CycloNum.rational(c, order)
            if c:
                kept[k] = c
        self.terms = kept

    # constructors -----------------------------------------------------
    @classmethod
    def from_exponents(cls, coeffs: dict, truncation, d: int | None = None,
                       order: int = DEFAULT_ORDER) -> "QSeries":
        """Build from a mapping ``rational exponent -> coefficient``."""
        exps = [Fraction(r) for r in coeffs]
        if d is None:
            d = lcm(1, *(r.denominator for r in exps))
        terms = {}
        for r, c in zip(exps, coeffs.values()):
            k = r * d
            if k.denominator != 1:
                raise ValueError(f"exponent {r} is not on the lattice (1/{d})Z")
            terms[int(k)] = terms.get(int(k), 0) + c
        return cls(terms, d, truncation, order)

    @classmethod
    def constant(cls, c, truncation, order: int = DEFAULT_ORDER) -> "QSeries":
        return cls({0: c}, 1, truncation, order)

    @classmethod
    def monomial(cls, exponent, truncation, c=1, order: int = DEFAULT_ORDER) -> "QSeries":
        return cls.from_exponents({Fraction(exponent): c}, truncation, order=order)

    # basic queries ----------------------------------------------------
    def exponents(self) -> list[Fraction]:
        return [Fraction(k, self.d) for k in sorted(self.terms)]

    def items(self):
        """``(exponent, coefficient)`` pairs in ascending exponent order."""
        for k in sorted(self.terms):
            yield Fraction(k, self.d), self.terms[k]

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self) -> Fraction:
        """Smallest exponent with a nonzero coefficient (the truncation if none)."""
        if not self.terms:
            return self.truncation
        return Fraction(min(self.terms), self.d)

    def coeff(self, r) -> CycloNum:
        r = Fraction(r)
        if r >= self.truncation:
            raise TruncationError(f"exponent {r} is not below the truncation {self.truncation}")
        k = r * self.d
        if k.denominator != 1:
            return CycloNum.rational(0, self.order)
        return self.terms.get(int(k), CycloNum.rational(0, self.order))

    __getitem__ = coeff

    def is_rational(self) -> bool:
        return all(c.is_rational for c in self.terms.values())

    def with_lattice(self, d: int) -> "QSeries":
        if d % self.d:
            raise ValueError(f"lattice 1/{d} does not refine 1/{self.d}")
        m = d // self.d
        return QSeries({k * m: c for k, c in self.terms.items()}, d, self.truncation, self.order)

    def reduced(self) -> "QSeries":
        """The same series on the coarsest lattice that carries it."""
        g = self.d
        for k in self.terms:
            g = gcd(g, k)
            if g == 1:
                break
        if g == 1:
            return self
        return QSeries({k // g: c for k, c in self.terms.items()}, self.d // g,
                       self.truncation, self.order)

    def truncate(self, truncation) -> "QSeries":
        truncation = Fraction(truncation)
        if truncation > self.truncation:
            raise TruncationError(
                f"cannot extend truncation from {self.truncation} to {truncation}")
        return QSeries(self.terms, self.d, truncation, self.order)

    def _unify(self, other: "QSeries") -> tuple["QSeries", "QSeries"]:
        if self.order != other.order:
            raise ValueError("series coefficients live in different cyclotomic fields")
        if self.d == other.d:
            return self, other
        d = lcm(self.d, other.d)
        return self.with_lattice(d), other.with_lattice(d)

    def _scalar(self, c) -> CycloNum:
        return c if isinstance(c, CycloNum) else CycloNum.rational(c, self.order)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Scalar):
            other = QSeries.constant(self._scalar(other), self.truncation, self.order)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._unify(other)
        trunc = min(a.truncation, b.truncation)
        if a.terms and b.terms and trunc <= min(a.valuation(), b.valuation()):
            raise DegenerateSeriesError(
                f"sum truncation {trunc} lies below both valuations")
        terms = dict(a.terms)
        for k, c in b.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return QSeries(terms, a.d, trunc, a.order)

    __radd__ = __add__

    def __neg__(self):
        return QSeries({k: -c for k, c in self.terms.items()}, self.d, self.truncation, self.order)

    def __sub__(self, other):
        if isinstance(other, Scalar):
            return self + (-self._scalar(other))
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar):
            c = self._scalar(other)
            return QSeries({k: v * c for k, v in self.terms.items()}, self.d,
                           self.truncation, self.order)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._unify(other)
        va, vb = a.valuation(), b.valuation()
        trunc = min(a.truncation + vb, b.truncation + va)
        kmax = trunc * a.d  # keys must satisfy k < kmax
        bk = sorted(b.terms)
        terms: dict[int, CycloNum] = {}
        for i in sorted(a.terms):
            ci = a.terms[i]
            for j in bk:
                k = i + j
                if k >= kmax:
                    break
                p = ci * b.terms[j]
                terms[k] = terms[k] + p if k in terms else p
        return QSeries(terms, a.d, trunc, a.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            return self * self._scalar(other).inverse()
        if not isinstance(other, QSeries):
            return NotImplemented
        return qs_div(self, other)

    def __rtruediv__(self, other):
        if isinstance(other, Scalar):
            # the numerator must not be what limits the quotient's truncation
            num_trunc = self.truncation + abs(self.valuation())
            return qs_div(QSeries.constant(self._scalar(other), num_trunc, self.order), self)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return (1 / self) ** (-n)
        if n == 0:
            return QSeries.constant(1, self.truncation - self.valuation(), self.order)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # equality and diffs -----------------------------------------------
    def first_mismatch(self, other: "QSeries", upto=None):
        """Smallest exponent below ``upto`` where the series differ, else None.

        Returns ``(exponent, self_coeff, other_coeff)``.
        """
        a, b = self._unify(other)
        limit = min(a.truncation, b.truncation) if upto is None else Fraction(upto)
        if limit > a.truncation or limit > b.truncation:
            raise TruncationError(f"comparison bound {limit} exceeds a truncation")
        zero = CycloNum.rational(0, a.order)
        for k in sorted(set(a.terms) | set(b.terms)):
            if Fraction(k, a.d) >= limit:
                break
            x, y = a.terms.get(k, zero), b.terms.get(k, zero)
            if x != y:
                return Fraction(k, a.d), x, y
        return None

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.truncation == other.truncation and self.first_mismatch(other) is None

    __hash__ = None

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "lattice_denominator": self.d,
            "truncation": _fstr(self.truncation),
            "terms": [{"exponent": _fstr(r), "coefficient": c.to_json()} for r, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QSeries":
        d = int(data["lattice_denominator"])
        terms = {}
        order = DEFAULT_ORDER
        for t in data["terms"]:
            c = CycloNum.from_json(t["coefficient"])
            order = c.order
            k = Fraction(t["exponent"]) * d
            if k.denominator != 1:
                raise ValueError(f"exponent {t['exponent']} is off the lattice")
            terms[int(k)] = c
        return cls(terms, d, Fraction(data["truncation"]), order)

    def to_csv(self) -> str:
        if not self.is_rational():
            raise ValueError("CSV form is only defined for rational coefficients")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["exponent", "coefficient"])
        for r, c in self.items():
            w.writerow([_fstr(r), _fstr(c.to_rational())])
        return buf.getvalue()

    def __repr__(self):
        shown = ", ".join(f"{_fstr(r)}: {c}" for r, c in list(self.items())[:8])
        more = ", ..." if len(self.terms) > 8 else ""
        return f"QSeries({{{shown}{more}}}, d={self.d}, O(q^{_fstr(self.truncation)}))"


def _fstr(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ----------------------------------------------------------------------
# module-level operations


def qs_arith(a: QSeries, b: QSeries, op: str) -> QSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def qs_div(a: QSeries, b: QSeries) -> QSeries:
    """Puiseux quotient ``a / b``; the valuation may become negative."""
    if b.is_zero():
        raise ZeroDivisionError("division by a series that vanishes to its truncation")
    a, b = a._unify(b)
    d = a.d
    kb = min(b.terms)
    vb = Fraction(kb, d)
    va = a.valuation()
    if a.is_zero():
        return QSeries({}, d, a.truncation - vb, a.order)
    trunc = min(a.truncation - vb, b.truncation - 2 * vb + va)
    kmax = ceil(trunc * d)  # quotient keys k must satisfy k/d < trunc
    lead_inv = b.terms[kb].inverse()
    btail = sorted((k - kb, c) for k, c in b.terms.items() if k != kb)
    rem = dict(a.terms)
    out: dict[int, CycloNum] = {}
    for k in range(min(rem), kmax + kb):
        c = rem.pop(k, None)
        if c is None or not c:
            continue
        qk = k - kb
        if Fraction(qk, d) >= trunc:
            break
        t = c * lead_inv
        out[qk] = t
        for off, bc in btail:
            j = k + off
            if j - kb >= kmax:
                break
            p = t * bc
            rem[j] = rem[j] - p if j in rem else -p
    return QSeries(out, d, trunc, a.order)


def _series_unit_log_derivative(a: QSeries) -> QSeries:
    return qs_derive(a) / a


def qs_log(a: QSeries) -> QSeries:
    """Logarithm of a series with constant term 1 and positive tail."""
    if a.valuation() != 0 or a.coeff(0) != 1:
        raise ValueError("log needs valuation 0 and constant term 1")
    dl = _series_unit_log_derivative(a)
    d = dl.d
    return QSeries({k: c * Fraction(d, k) for k, c in dl.terms.items() if k != 0},
                   d, dl.truncation, a.order)


def qs_exp(a: QSeries) -> QSeries:
    """Exponential of a series with positive valuation."""
    if a.terms and a.valuation() <= 0:
        raise ValueError("exp needs a series with positive valuation")
    d = a.d
    da = qs_derive(a)
    kmax = ceil(a.truncation * d)
    da_items = sorted(da.terms.items())
    f: dict[int, CycloNum] = {0: CycloNum.rational(1, a.order)}
    # D f = f * D a gives k/d * f_k = sum_j (D a)_j f_{k-j}
    for k in range(1, kmax):
        acc = None
        for j, c in da_items:
            if j > k:
                break
            fk = f.get(k - j)
            if fk is not None:
                p = c * fk
                acc = p if acc is None else acc + p
        if acc is not None and acc:
            f[k] = acc * Fraction(d, k)
    return QSeries(f, d, a.truncation, a.order)


def qs_derive(a: QSeries) -> QSeries:
    """The operator q d/dq: c q^r -> r c q^r."""
    return QSeries({k: c * Fraction(k, a.d) for k, c in a.terms.items() if k},
                   a.d, a.truncation, a.order)


def qs_subst_tau(a: QSeries, scale, shift=0) -> QSeries:
    """Substitute tau -> scale*tau + shift, so q^r -> e^{2 pi i shift r} q^(scale r)."""
    scale, shift = Fraction(scale), Fraction(shift)
    if scale <= 0:
        raise ValueError("scale must be a positive rational")
    n = a.order
    new_d = (scale / a.d).denominator
    terms = {}
    for k, c in a.terms.items():
        r = Fraction(k, a.d)
        turns = shift * n * r
        if turns.denominator != 1:
            raise UnsupportedSubstitutionError(
                f"phase e^(2 pi i {shift * r}) is not in Q(zeta_{n})")
        if turns % n:
            c = c * CycloNum.zeta(int(turns), n)
        terms[int(scale * r * new_d)] = c
    return QSeries(terms, new_d, scale * a.truncation, n)


def qs_coeff(a: QSeries, r) -> CycloNum:
    return a.coeff(r)


def series_sum(parts, truncation, d: int = 1, order: int = DEFAULT_ORDER) -> QSeries:
    """Sum of ``(exponent, coefficient)`` pairs, keeping those below ``truncation``."""
    truncation = Fraction(truncation)
    terms: dict[int, object] = {}
    for r, c in parts:
        r = Fraction(r)
        if r >= truncation:
            continue
        k = r * d
        if k.denominator != 1:
            raise ValueError(f"exponent {r} is off the lattice (1/{d})Z")
        k = int(k)
        terms[k] = terms.get(k, 0) + c
    return QSeries(terms, d, truncation, order)

