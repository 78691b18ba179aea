"""Eta, theta and Eisenstein series as exact truncated q-expansions.

Conventions follow the half-period thetas at z = 0, indexed so that

    theta1 = sum q^(n^2/2),  theta2 = sum (-1)^n q^(n^2/2),
    theta3 = sum q^((n+1/2)^2/2),

with q = e^{2 pi i tau}.  The Eisenstein series are normalized to constant
term 1, ``E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n`` with ``B_1 = -1/2``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import ceil, comb, isqrt

from .cyclo import DEFAULT_ORDER, CycloNum
from .qseries import QSeries, qs_derive, qs_subst_tau


def _max_index(truncation, offset=0) -> int:
    """Largest integer m with m + offset < truncation (may be negative)."""
    return ceil(Fraction(truncation) - Fraction(offset)) - 1


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number B_k with B_1 = -1/2."""
    if k < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    if k == 0:
        return Fraction(1)
    if k > 1 and k % 2:
        return Fraction(0)
    return -sum(comb(k + 1, j) * bernoulli(j) for j in range(k)) / (k + 1)


def bernoulli_table(k: int) -> list[Fraction]:
    return [bernoulli(j) for j in range(k + 1)]


def divisor_sigma(n: int, power: int = 1) -> int:
    total = 0
    for a in range(1, isqrt(n) + 1):
        if n % a == 0:
            b = n // a
            total += a**power
            if b != a:
                total += b**power
    return total


def _sigma_table(nmax: int, power: int) -> list[int]:
    sig = [0] * (nmax + 1)
    for a in range(1, nmax + 1):
        p = a**power
        for m in range(a, nmax + 1, a):
            sig[m] += p
    return sig


@lru_cache(maxsize=64)
def eta(order=40, field: int = DEFAULT_ORDER) -> QSeries:
    """Dedekind eta, q^(1/24) prod_{n>=1} (1 - q^n), on the lattice (1/24)Z."""
    order = Fraction(order)
    top = _max_index(order, Fraction(1, 24))
    coeffs = [0] * (max(top, 0) + 1)
    coeffs[0] = 1
    for n in range(1, top + 1):
        for m in range(top, n - 1, -1):
            coeffs[m] -= coeffs[m - n]
    terms = {1 + 24 * m: c for m, c in enumerate(coeffs) if c} if top >= 0 else {}
    return QSeries(terms, 24, order, field)


@lru_cache(maxsize=64)
def theta(i: int, order=40, field: int = DEFAULT_ORDER) -> QSeries:
    """Half-period theta constant theta_i, i in {1, 2, 3}."""
    order = Fraction(order)
    if i in (1, 2):
        terms = {}
        n = 0
        while Fraction(n * n, 2) < order:
            sign = -1 if (i == 2 and n % 2) else 1
            terms[n * n] = terms.get(n * n, 0) + (1 if n == 0 else 2 * sign)
            n += 1
        return QSeries(terms, 2, order, field)
    if i == 3:
        terms = {}
        n = 0
        while Fraction((2 * n + 1) ** 2, 8) < order:
            terms[(2 * n + 1) ** 2] = 2
            n += 1
        return QSeries(terms, 8, order, field)
    raise ValueError(f"theta index must be 1, 2 or 3, got {i}")


@lru_cache(maxsize=64)
def eisenstein(k: int, order=40, field: int = DEFAULT_ORDER) -> QSeries:
    """Level-one Eisenstein series E_k with constant term 1."""
    if k < 2 or k % 2:
        raise ValueError(f"Eisenstein weight must be even and >= 2, got {k}")
    top = _max_index(order)
    factor = -Fraction(2 * k) / bernoulli(k)
    sig = _sigma_table(max(top, 0), k - 1)
    terms = {0: 1}
    terms.update({n: factor * sig[n] for n in range(1, top + 1)})
    return QSeries(terms, 1, order, field)


def half_theta(order=40, field: int = DEFAULT_ORDER) -> QSeries:
    """The one-sided series sum_{n>0} n q^(n^2)."""
    terms = {}
    n = 1
    while n * n < Fraction(order):
        terms[n * n] = n
        n += 1
    return QSeries(terms, 1, order, field)


def theta_rescaled(i: int, scale, order) -> QSeries:
    """theta_i(scale * tau) known below ``order``."""
    scale = Fraction(scale)
    return qs_subst_tau(theta(i, order / scale), scale)


def eta_rescaled(scale, shift, order) -> QSeries:
    scale = Fraction(scale)
    return qs_subst_tau(eta(order / scale), scale, shift)


def e2_rescaled(scale, shift, order) -> QSeries:
    scale = Fraction(scale)
    return qs_subst_tau(eisenstein(2, order / scale), scale, shift)


def _zeta48(k: int) -> CycloNum:
    return CycloNum.zeta(k, 48)


# ----------------------------------------------------------------------
# exact identity catalog: each builder returns (lhs, rhs) known past T


def _id_eta_triple(T):
    t = T + 1
    lhs = eta_rescaled(Fraction(1, 2), 0, t) * eta_rescaled(Fraction(1, 2), Fraction(1, 2), t) \
        * eta_rescaled(2, 0, t)
    rhs = eta(t) ** 3 * _zeta48(1)
    return lhs, rhs


def _id_theta_from_eta_1(T):
    t = T + 1
    return theta(1, t), eta_rescaled(Fraction(1, 2), Fraction(1, 2), t) ** 2 / eta(t) * _zeta48(-2)


def _id_theta_from_eta_2(T):
    t = T + 1
    return theta(2, t), eta_rescaled(Fraction(1, 2), 0, t) ** 2 / eta(t)


def _id_theta_from_eta_3(T):
    t = T + 1
    return theta(3, t), eta_rescaled(2, 0, t) ** 2 / eta(t) * 2


def _id_theta_triple(T):
    t = T + 1
    return theta(1, t) * theta(2, t) * theta(3, t), eta(t) ** 3 * 2


def _id_e2_eta_logderiv(T):
    t = T + 1
    return eisenstein(2, t), qs_derive(eta(t)) / eta(t) * 24


def _id_e2_halfarg_1(T):
    t = T + 1
    lhs = e2_rescaled(Fraction(1, 2), Fraction(1, 2), t) - eisenstein(2, t) * 2
    return lhs, theta(1, t) ** 4 - theta(2, t) ** 4 * 2


def _id_e2_halfarg_2(T):
    t = T + 1
    lhs = e2_rescaled(Fraction(1, 2), 0, t) - eisenstein(2, t) * 2
    return lhs, theta(2, t) ** 4 - theta(1, t) ** 4 * 2


def _id_e2_double(T):
    t = T + 1
    lhs = e2_rescaled(2, 0, t) * 4 - eisenstein(2, t) * 2
    return lhs, theta(1, t) ** 4 + theta(2, t) ** 4


def _id_jacobi_quartic(T):
    t = T + 1
    return theta(1, t) ** 4, theta(2, t) ** 4 + theta(3, t) ** 4


def _id_theta_4tau(T):
    t = T + 1
    return theta(1, t) + theta(2, t), theta_rescaled(1, 4, t) * 2


def _id_theta_quarter(T):
    t = T + 1
    return theta(1, t) + theta(3, t), theta_rescaled(1, Fraction(1, 4), t)


CATALOG = {
    "ETA_TRIPLE": _id_eta_triple,
    "THETA_FROM_ETA_1": _id_theta_from_eta_1,
    "THETA_FROM_ETA_2": _id_theta_from_eta_2,
    "THETA_FROM_ETA_3": _id_theta_from_eta_3,
    "THETA_TRIPLE": _id_theta_triple,
    "E2_ETA_LOGDERIV": _id_e2_eta_logderiv,
    "E2_HALFARG_1": _id_e2_halfarg_1,
    "E2_HALFARG_2": _id_e2_halfarg_2,
    "E2_DOUBLE": _id_e2_double,
    "JACOBI_QUARTIC": _id_jacobi_quartic,
    "THETA_4TAU": _id_theta_4tau,
    "THETA_QUARTER": _id_theta_quarter,
}
