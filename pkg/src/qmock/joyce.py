"""Joyce invariants of multiples of a single class, and their generating series.

Motivic values live in Q(q), with q = l^{-1} and the factor (l - 1) omitted.
:class:`QRational` stores ``q**shift * num(q) / den(q)`` with ``num`` and
``den`` coprime, neither divisible by q, and ``den`` monic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from . import poly
from .errors import PoleError, ResourceLimitError
from .forms import _max_index, bernoulli, eisenstein, half_theta
from .qseries import QSeries, qs_derive
from .report import IdentityReport, Mismatch, compare_series

#: Largest multiplicity for which compositions are enumerated by default.
MAX_COMPOSITION_N = 16
#: Ceiling on the configurable bound; 2^23 compositions is already minutes of work.
HARD_COMPOSITION_N = 24

HALF_SUM = "HALF_SUM"
DOUBLE_SUM = "DOUBLE_SUM"
NORMALIZATIONS = (HALF_SUM, DOUBLE_SUM)

#: The curly-J normalization certified by the duality identity for k = 2, 4, 6
#: (see ``determine_canonical_normalization``; the test suite re-derives it).
CANONICAL_NORMALIZATION = HALF_SUM


class QRational:
    __slots__ = ("num", "den", "shift")

    def __init__(self, num=(), den=(1,), shift: int = 0):
        num, den = poly.normalize(num), poly.normalize(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den, self.shift = (), (Fraction(1),), 0
            return
        shift += _low_degree(num) - _low_degree(den)
        num, den = num[_low_degree(num):], den[_low_degree(den):]
        g = poly.gcd(num, den)
        if len(g) > 1:
            num, den = poly.divmod_(num, g)[0], poly.divmod_(den, g)[0]
        lead = den[-1]
        self.num = poly.scale(num, 1 / lead)
        self.den = poly.scale(den, 1 / lead)
        self.shift = shift

    @classmethod
    def q(cls, power: int = 1) -> "QRational":
        return cls((1,), (1,), power)

    @classmethod
    def const(cls, c) -> "QRational":
        return cls((Fraction(c),))

    def _coerce(self, other):
        if isinstance(other, QRational):
            return other
        if isinstance(other, (int, Fraction)):
            return QRational.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num:
            return other
        if not other.num:
            return self
        m = min(self.shift, other.shift)
        a = _shift_poly(poly.mul(self.num, other.den), self.shift - m)
        b = _shift_poly(poly.mul(other.num, self.den), other.shift - m)
        return QRational(poly.add(a, b), poly.mul(self.den, other.den), m)

    __radd__ = __add__

    def __neg__(self):
        return QRational(poly.neg(self.num), self.den, self.shift)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QRational(poly.mul(self.num, other.num), poly.mul(self.den, other.den),
                         self.shift + other.shift)

    __rmul__ = __mul__

    def inverse(self) -> "QRational":
        if not self.num:
            raise ZeroDivisionError("inverse of the zero rational function")
        return QRational(self.den, self.num, -self.shift)

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
        out = QRational.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self.num, self.den, self.shift) == (other.num, other.den, other.shift)

    def __hash__(self):
        return hash((self.num, self.den, self.shift))

    def subs_scaled(self, power: int) -> "QRational":
        """Multiply by q**power (used for x -> q x on x**power)."""
        return QRational(self.num, self.den, self.shift + power)

    def numerator_denominator(self) -> tuple[tuple, tuple]:
        """Plain polynomial numerator and denominator with the q-power folded in."""
        if self.shift >= 0:
            return _shift_poly(self.num, self.shift), self.den
        return self.num, _shift_poly(self.den, -self.shift)

    def to_series(self, order) -> QSeries:
        """Expansion around q = 0, known below ``order``."""
        order = Fraction(order)
        if not self.num:
            return QSeries({}, 1, order)
        if self.den == (Fraction(1),):
            return QSeries({i + self.shift: c for i, c in enumerate(self.num)}, 1, order)
        inner = order - self.shift
        n = QSeries(dict(enumerate(self.num)), 1, inner)
        d = QSeries(dict(enumerate(self.den)), 1, inner)
        s = n / d
        return QSeries({k + self.shift: c for k, c in s.terms.items()}, 1, order)

    def to_json(self) -> dict:
        n, d = self.numerator_denominator()
        return {"num": [_fs(c) for c in n], "den": [_fs(c) for c in d]}

    def __str__(self):
        n, d = self.numerator_denominator()
        if d and d[0] < 0:  # print 1 - q^n rather than q^n - 1
            n, d = poly.neg(n), poly.neg(d)
        if d == (Fraction(1),):
            return _poly_str(n)
        return f"{_wrap(_poly_str(n))}/({_poly_str(d)})"

    def __repr__(self):
        return f"QRational({self})"


def _low_degree(p) -> int:
    for i, c in enumerate(p):
        if c:
            return i
    return 0


def _shift_poly(p, k: int):
    return (Fraction(0),) * k + tuple(p) if p else p


def _fs(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _wrap(text: str) -> str:
    return text if not any(ch in text for ch in " /") else f"({text})"


def _poly_str(p) -> str:
    if not p:
        return "0"
    parts = []
    for i, c in enumerate(p):
        if c:
            mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            coef = _fs(c)
            if mono and c == 1:
                coef = ""
            elif mono and c == -1:
                coef = "-"
            elif mono:
                coef += "*"
            parts.append(coef + mono)
    return " + ".join(parts).replace("+ -", "- ")


# ----------------------------------------------------------------------


@dataclass(frozen=True)
class JoyceParams:
    self_pairing: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("multiplicity n must be at least 1")


@lru_cache(maxsize=None)
def q_pochhammer(n: int) -> tuple:
    """(q; q)_n = prod_{i=1}^{n} (1 - q^i) as a polynomial."""
    p = (Fraction(1),)
    for i in range(1, n + 1):
        p = poly.mul(p, poly.normalize([1] + [0] * (i - 1) + [-1]))
    return p


def motivic_gl(n: int) -> QRational:
    """I(GL(n, C)) = l^{n^2} (1 - l^{-1}) ... (1 - l^{-n}) at l = 1/q."""
    if n < 1:
        raise ValueError("GL(n) needs n >= 1")
    return QRational(q_pochhammer(n), (1,), -n * n)


def compositions(n: int) -> Iterator[tuple[int, ...]]:
    """All ordered compositions of n into positive parts."""
    for mask in range(1 << (n - 1)):
        parts, run = [], 1
        for bit in range(n - 1):
            if mask >> bit & 1:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield tuple(parts)


def joyce_sum(p: JoyceParams, convention: str = "length",
              max_n: int = MAX_COMPOSITION_N) -> QRational:
    """Joyce invariant of n*alpha by direct enumeration of ordered decompositions.

    Each composition (k_1, ..., k_m) of n contributes
    ``q^(pairing * sum_{i>j} k_i k_j) * w * prod 1/I(GL(k_i))``; the weight is
    ``(-1)^(m-1)/m`` for ``convention="length"`` and ``(-1)^(n-1)/n`` for
    ``convention="printed"``.
    """
    if max_n > HARD_COMPOSITION_N:
        raise ResourceLimitError(
            f"composition bound {max_n} exceeds the hard ceiling {HARD_COMPOSITION_N}")
    if p.n > max_n:
        raise ResourceLimitError(
            f"n = {p.n} needs 2^{p.n - 1} compositions; the bound is n <= {max_n}")
    if convention not in ("length", "printed"):
        raise ValueError(f"unknown weight convention {convention!r}")
    n = p.n
    grouped: dict[tuple, Fraction] = {}
    for comp in compositions(n):
        m = len(comp)
        pair = sum(comp[i] * comp[j] for i in range(m) for j in range(i))
        exp = p.self_pairing * pair
        if convention == "length":
            w = Fraction((-1) ** (m - 1), m)
        else:
            w = Fraction((-1) ** (n - 1), n)
        key = (tuple(sorted(comp)), exp)
        grouped[key] = grouped.get(key, 0) + w
    # every prod (q;q)_{k_i} divides (q;q)_n, so accumulate over that denominator
    full = q_pochhammer(n)
    acc: dict[int, Fraction] = {}
    for (parts, exp), w in sorted(grouped.items()):
        if not w:
            continue
        denom = (Fraction(1),)
        for k in parts:
            denom = poly.mul(denom, q_pochhammer(k))
        multinomial, rem = poly.divmod_(full, denom)
        assert not rem
        # 1/I(GL(k)) = q^{k^2}/(q;q)_k
        base = exp + sum(k * k for k in parts)
        for i, c in enumerate(multinomial):
            if c:
                acc[base + i] = acc.get(base + i, 0) + w * c
    return QRational(poly.from_sparse(acc), full)


def joyce_closed(n: int) -> QRational:
    """q^{n^2} / (n (1 - q^n))."""
    if n < 1:
        raise ValueError("n must be at least 1")
    den = poly.normalize([n] + [0] * (n - 1) + [-n])
    return QRational((1,), den, n * n)


def qexp_recursion_check(n_max: int, order=20) -> IdentityReport:
    """Check F(x) - F(qx) = x F(x) and the coefficients of log F(x).

    F(x) = sum_m q^{-m^2} x^m / I(GL(m)), truncated at x^n_max, with
    coefficients in Q(q).  The x^n coefficient of log F must equal
    1/(n (1 - q^n)); each is also compared as a q-expansion below ``order``.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    F = [QRational.const(1)]
    for m in range(1, n_max + 1):
        F.append(QRational.q(-m * m) / motivic_gl(m))
    # F(x) - F(qx) = x F(x): compare x^m coefficients for 1 <= m <= n_max
    for m in range(1, n_max + 1):
        lhs = F[m] - F[m].subs_scaled(m)
        if lhs != F[m - 1]:
            return IdentityReport("QEXP_RECURSION", Fraction(n_max), False,
                                  Mismatch(Fraction(m), lhs, F[m - 1]),
                                  {"stage": "functional equation"})
    # log F via x L' = x F'/F: n L_n = n F_n - sum_{j<n} j L_j F_{n-j}
    L = [QRational()]
    for n in range(1, n_max + 1):
        acc = F[n] * n
        for j in range(1, n):
            acc = acc - L[j] * F[n - j] * j
        L.append(acc / n)
    for n in range(1, n_max + 1):
        expected = QRational((1,), poly.normalize([n] + [0] * (n - 1) + [-n]))
        if L[n] != expected:
            return IdentityReport("QEXP_RECURSION", Fraction(n_max), False,
                                  Mismatch(Fraction(n), L[n], expected), {"stage": "log F"})
        # q-expansion of 1/(n(1-q^n)) is sum_t q^{nt}/n
        series = L[n].to_series(order)
        direct = QSeries({n * t: Fraction(1, n) for t in range(order // n + 1)}, 1, order)
        m = series.first_mismatch(direct)
        if m is not None:
            return IdentityReport("QEXP_RECURSION", Fraction(n_max), False, Mismatch(*m),
                                  {"stage": f"q-expansion of x^{n} coefficient"})
    return IdentityReport("QEXP_RECURSION", Fraction(n_max), True)


def residue_at_one(f: QRational) -> Fraction:
    """Coefficient of (q-1)^{-1} in the Laurent expansion of f at q = 1."""
    if not f.num or poly.evaluate(f.den, 1) != 0:
        return Fraction(0)
    slope = poly.evaluate(poly.derivative(f.den), 1)
    if slope == 0:
        raise PoleError("pole of order >= 2 at q = 1; only simple poles are supported")
    # num and den are coprime, so num(1) != 0 here; q^shift is 1 at q = 1
    return poly.evaluate(f.num, 1) / slope


def zeta_residue_partial(k: int, n_max: int) -> Fraction:
    """sum_{n <= n_max} Res_{q=1} J^{n alpha} / n^k, which equals -sum 1/n^{k+2}."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    total = Fraction(0)
    for n in range(1, n_max + 1):
        total += residue_at_one(joyce_closed(n)) / Fraction(n) ** k
    return total


# ----------------------------------------------------------------------
# generating series


def _inv_power(n: int, e: int) -> Fraction:
    """n ** (-e) as an exact rational, for any integer e."""
    return Fraction(1, n**e) if e >= 0 else Fraction(n ** (-e))


def jk_series(k: int, order) -> QSeries:
    """J_k = sum_{n>0} q^{n^2} / (n^{k+1} (1 - q^n))."""
    order = Fraction(order)
    top = _max_index(order)
    terms: dict[int, Fraction] = {}
    n = 1
    while n * n <= top:
        c = _inv_power(n, k + 1)
        for e in range(n * n, top + 1, n):
            terms[e] = terms.get(e, 0) + c
        n += 1
    return QSeries(terms, 1, order)


def curly_constant(k: int) -> Fraction:
    """B_{-k}/(2k) for negative even k; 0 otherwise."""
    if k < 0 and k % 2 == 0:
        return bernoulli(-k) / (2 * k)
    return Fraction(0)


def curly_jk_series(k: int, order, normalization: str = CANONICAL_NORMALIZATION) -> QSeries:
    """The corrected generating series in one of its two displayed forms.

    HALF_SUM:   B_{-k}/2k - 1/2 sum_{n>0} q^{n^2}/n^{k+1} + J_k
    DOUBLE_SUM: B_{-k}/2k + sum_{n != 0} q^{n^2}/(n^{k+1} (1 - q^n))

    The bilateral sum is expanded with n = -m rewritten as
    (-1)^k q^{m^2+m}/(m^{k+1} (1 - q^m)).
    """
    order = Fraction(order)
    const = QSeries.constant(curly_constant(k), order)
    if normalization == HALF_SUM:
        top = _max_index(order)
        half = QSeries({n * n: -_inv_power(n, k + 1) / 2 for n in range(1, top + 1)
                        if n * n <= top}, 1, order)
        return const + half + jk_series(k, order)
    if normalization == DOUBLE_SUM:
        top = _max_index(order)
        terms: dict[int, Fraction] = {}
        sign = -1 if k % 2 else 1
        m = 1
        while m * m <= top:
            c = _inv_power(m, k + 1)
            for e in range(m * m, top + 1, m):
                terms[e] = terms.get(e, 0) + c
            for e in range(m * m + m, top + 1, m):
                terms[e] = terms.get(e, 0) + sign * c
            m += 1
        return const + QSeries(terms, 1, order)
    raise ValueError(f"unknown normalization {normalization!r}")


def _iterate_derive(s: QSeries, times: int) -> QSeries:
    for _ in range(times):
        s = qs_derive(s)
    return s


def duality_check(k: int, order=30, normalization: str = CANONICAL_NORMALIZATION) -> IdentityReport:
    """D^{k-1} curlyJ_{k-2} + curlyJ_{-k} = -(B_k/2k) E_k on exponents 1..order."""
    if k < 2 or k % 2:
        raise ValueError("duality needs an even k >= 2")
    t = Fraction(order) + 1
    lhs = _iterate_derive(curly_jk_series(k - 2, t, normalization), k - 1) \
        + curly_jk_series(-k, t, normalization)
    rhs = eisenstein(k, t) * (-bernoulli(k) / (2 * k))
    # constants are compared separately: D^{k-1} annihilates the k-2 constant
    const_ok = lhs.coeff(0) == rhs.coeff(0) == -bernoulli(k) / (2 * k)
    lhs_nc = lhs - lhs.coeff(0)
    rhs_nc = rhs - rhs.coeff(0)
    rep = compare_series(f"DUALITY_{k}", lhs_nc, rhs_nc, t,
                         {"normalization": normalization, "constant_term_ok": const_ok})
    if not const_ok:
        return IdentityReport(rep.id, rep.order, False,
                              Mismatch(Fraction(0), lhs.coeff(0), rhs.coeff(0)), rep.notes)
    return IdentityReport(rep.id, Fraction(order), rep.passed, rep.first_mismatch, rep.notes)


def determine_canonical_normalization(order=30, ks=(2, 4, 6)) -> str | None:
    """The unique normalization for which the duality holds at every k in ``ks``."""
    passing = [nm for nm in NORMALIZATIONS
               if all(duality_check(k, order, nm).passed for k in ks)]
    return passing[0] if len(passing) == 1 else None


def joyce_table(n_max: int, max_n: int = MAX_COMPOSITION_N) -> list[dict]:
    """Rows (n, closed form, composition-sum agreement, residue at q = 1)."""
    if max_n > HARD_COMPOSITION_N:
        raise ResourceLimitError(
            f"composition bound {max_n} exceeds the hard ceiling {HARD_COMPOSITION_N}")
    rows = []
    for n in range(1, n_max + 1):
        closed = joyce_closed(n)
        agree = None
        if n <= max_n:
            agree = joyce_sum(JoyceParams(2, n), max_n=max_n) == closed
        rows.append({"n": n, "closed_form": closed, "composition_sum_agrees": agree,
                     "residue": residue_at_one(closed)})
    return rows


def half_theta_series(order) -> QSeries:
    return half_theta(order)
