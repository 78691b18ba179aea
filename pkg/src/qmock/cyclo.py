"""Exact arithmetic in the cyclotomic field Q(zeta_N).

Elements are residues modulo the N-th cyclotomic polynomial, stored as the
``phi(N)`` rational coefficients of the reduced representative.  The default
field is Q(zeta_48): it contains i = zeta^12, e^{pi i/24} = zeta and every
other phase that appears when eta and theta series are substituted.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd as igcd

from . import poly
from .errors import OrderMismatchError
from .precision import context, to_mpf

DEFAULT_ORDER = 48


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if igcd(k, n) == 1)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Phi_n as a coefficient tuple, lowest degree first."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    p = poly.normalize([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            p, r = poly.divmod_(p, cyclotomic_polynomial(d))
            assert not r
    return p


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """x**j mod Phi_n for 0 <= j < max(2*phi(n) - 1, n), padded to phi(n)."""
    phi_poly = cyclotomic_polynomial(n)
    deg = len(phi_poly) - 1
    rows = []
    for j in range(max(2 * deg - 1, n)):
        mono = [0] * j + [1]
        r = poly.divmod_(poly.normalize(mono), phi_poly)[1]
        rows.append(tuple(r) + (Fraction(0),) * (deg - len(r)))
    return tuple(rows)


class CycloNum:
    """An element of Q(zeta_N), immutable and hashable."""

    __slots__ = ("order", "coeffs", "is_rational")

    def __init__(self, coeffs=(), order: int = DEFAULT_ORDER):
        deg = len(cyclotomic_polynomial(order)) - 1
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > deg:
            table = _power_table(order)
            if len(cs) > len(table):
                p = poly.divmod_(poly.normalize(cs), cyclotomic_polynomial(order))[1]
                cs = list(p)
            else:
                red = cs[:deg]
                for j in range(deg, len(cs)):
                    if cs[j]:
                        for i, t in enumerate(table[j]):
                            if t:
                                red[i] += cs[j] * t
                cs = red
        cs += [Fraction(0)] * (deg - len(cs))
        self.order = order
        self.coeffs = tuple(cs)
        self.is_rational = not any(cs[1:])

    # construction -----------------------------------------------------
    @classmethod
    def rational(cls, x, order: int = DEFAULT_ORDER) -> "CycloNum":
        return cls((x,), order)

    @classmethod
    def zeta(cls, k: int = 1, order: int = DEFAULT_ORDER) -> "CycloNum":
        """The root of unity zeta_N**k."""
        return cls(_power_table(order)[k % order], order)

    def _coerce(self, other) -> "CycloNum":
        if isinstance(other, CycloNum):
            if other.order != self.order:
                raise OrderMismatchError(
                    f"cannot combine Q(zeta_{self.order}) with Q(zeta_{other.order})")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNum.rational(other, self.order)
        return NotImplemented

    # ring operations --------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloNum([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloNum([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational:
            c = other.coeffs[0]
            return CycloNum([a * c for a in self.coeffs], self.order)
        if self.is_rational:
            c = self.coeffs[0]
            return CycloNum([c * b for b in other.coeffs], self.order)
        a, b = self.coeffs, other.coeffs
        prod = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycloNum(prod, self.order)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if self.is_rational:
            if self.coeffs[0] == 0:
                raise ZeroDivisionError("inverse of zero in cyclotomic field")
            return CycloNum.rational(1 / self.coeffs[0], self.order)
        g, s, _ = poly.xgcd(poly.normalize(self.coeffs), cyclotomic_polynomial(self.order))
        # Phi_N is irreducible, so any nonzero residue is coprime to it.
        assert g == (Fraction(1),)
        return CycloNum(s, self.order)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloNum.rational(1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "CycloNum":
        """Complex conjugation, zeta -> zeta**(N-1)."""
        acc = [Fraction(0)] * len(self.coeffs)
        table = _power_table(self.order)
        for j, c in enumerate(self.coeffs):
            if c:
                for i, t in enumerate(table[(-j) % self.order]):
                    if t:
                        acc[i] += c * t
        return CycloNum(acc, self.order)

    # comparisons ------------------------------------------------------
    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coeffs[0] == other
        if isinstance(other, CycloNum):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def to_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # embedding and (de)serialization ----------------------------------
    def to_complex(self, prec: int):
        """Value under the principal embedding zeta_N -> e^{2 pi i/N}."""
        ctx = context(prec)
        if self.is_rational:
            return ctx.mpc(to_mpf(ctx, self.coeffs[0]))
        acc = ctx.mpc(0)
        for j, c in enumerate(self.coeffs):
            if c:
                acc += to_mpf(ctx, c) * ctx.expjpi(ctx.mpf(2 * j) / self.order)
        return acc

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [_frac_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CycloNum":
        order = int(data["order"])
        coeffs = [Fraction(c) for c in data["coeffs"]]
        if len(coeffs) != totient(order):
            raise ValueError("coefficient list length must equal phi(order)")
        return cls(coeffs, order)

    def __repr__(self):
        return f"CycloNum({[_frac_str(c) for c in self.coeffs]!r}, order={self.order})"

    def __str__(self):
        if self.is_rational:
            return _frac_str(self.coeffs[0])
        parts = []
        for j, c in enumerate(self.coeffs):
            if c:
                mono = "" if j == 0 else (f"z{self.order}" if j == 1 else f"z{self.order}^{j}")
                if j and c == 1:
                    parts.append(mono)
                elif j and c == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(_frac_str(c) + ("*" + mono if mono else ""))
        return "(" + " + ".join(parts).replace("+ -", "- ") + ")"


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def cyclo_arith(a: CycloNum, b: CycloNum, op: str) -> CycloNum:
    if a.order != b.order:
        raise OrderMismatchError("operands must share the cyclotomic order")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def cyclo_inv(a: CycloNum) -> CycloNum:
    return a.inverse()


def cyclo_to_complex(a: CycloNum, prec: int):
    return a.to_complex(prec)
