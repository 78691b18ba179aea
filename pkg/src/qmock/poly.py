"""Dense univariate polynomials over Q, stored as tuples of Fractions.

Index ``i`` holds the coefficient of ``x**i``; the canonical form has no
trailing zeros, so the zero polynomial is the empty tuple.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Poly = tuple  # tuple[Fraction, ...]


def normalize(p: Sequence) -> Poly:
    p = [c if type(c) is Fraction else Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: Poly) -> int:
    return len(p) - 1


def add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return normalize(out)


def neg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def sub(a: Poly, b: Poly) -> Poly:
    return add(a, neg(b))


def scale(a: Poly, c) -> Poly:
    c = Fraction(c)
    if c == 0:
        return ()
    return tuple(x * c for x in a)


def mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return normalize(out)


def divmod_(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lead_inv = 1 / b[-1]
    q = [Fraction(0)] * max(len(a) - db, 0)
    for k in range(len(a) - 1 - db, -1, -1):
        c = r[k + db] * lead_inv
        if c:
            q[k] = c
            for j, y in enumerate(b):
                r[k + j] -= c * y
    return normalize(q), normalize(r[:db])


def monic(a: Poly) -> Poly:
    if not a:
        return a
    return scale(a, 1 / a[-1])


def gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g`` and ``g`` monic."""
    r0, r1 = a, b
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return (), (), ()
    inv = 1 / r0[-1]
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def evaluate(p: Poly, x):
    if x == 1:
        return sum((c for c in p if c), Fraction(0))
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Poly) -> Poly:
    return normalize([i * c for i, c in enumerate(p)][1:])


def from_sparse(terms: dict[int, object]) -> Poly:
    if not terms:
        return ()
    out = [Fraction(0)] * (max(terms) + 1)
    for k, c in terms.items():
        out[k] += Fraction(c)
    return normalize(out)
