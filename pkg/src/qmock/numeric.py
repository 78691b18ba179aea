"""Arbitrary-precision evaluation on the upper half-plane and numerical laws.

Every evaluation is carried out in an explicit mpmath context obtained from
:func:`qmock.precision.context`; no global mpmath state is touched.

Conventions: ``theta(z; tau) = sum_{nu in 1/2 + Z} e^{pi i nu^2 tau + 2 pi i nu (z + 1/2)}``,
the half-period thetas are those of :mod:`qmock.forms`, and
``d/(2 pi i ds)`` of a function that is not holomorphic in ``s`` is taken as the
Wirtinger derivative ``(1/2)(d/da - i d/db)`` for ``s = a + ib``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, log, sqrt
from typing import Callable

from .errors import AccuracyError, ConditioningError, PoleError
from .lerch import g_series, h_series
from .precision import GUARD_DIGITS, context, to_mpf
from .qseries import QSeries

MIN_IMAG = 1e-3
LN10 = log(10)


@dataclass(frozen=True)
class HPComplex:
    """A point of C given by decimal strings, evaluated at a chosen precision."""
    re: str
    im: str
    prec: int = 50

    def __post_init__(self):
        if self.prec < 10:
            raise ValueError("precision must be at least 10 digits")

    @classmethod
    def parse(cls, text: str, prec: int = 50) -> "HPComplex":
        """Parse forms such as ``0.5+1.0i``, ``-0.25-2i``, ``1.5i`` or ``2``."""
        s = text.strip().replace(" ", "").replace("j", "i")
        if not s.endswith("i"):
            return cls(_checked_real(s), "0", prec)
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        while cut > 0 and body[cut - 1] in "eE":
            cut = max(body.rfind("+", 0, cut - 1), body.rfind("-", 0, cut - 1))
        if cut <= 0:
            re_part, im_part = "0", body or "1"
        else:
            re_part, im_part = body[:cut], body[cut:]
        if im_part in ("+", "-", ""):
            im_part += "1"
        return cls(_checked_real(re_part), _checked_real(im_part), prec)

    def value(self, ctx=None):
        ctx = ctx or context(self.prec)
        return ctx.mpc(ctx.mpf(self.re), ctx.mpf(self.im))


def _checked_real(s: str) -> str:
    try:
        float(s)
    except ValueError:
        raise ValueError(f"cannot parse {s!r} as a real number") from None
    return s[1:] if s.startswith("+") else s


def _as_mpc(ctx, x):
    if isinstance(x, HPComplex):
        return x.value(ctx)
    if isinstance(x, Fraction):
        return ctx.mpc(to_mpf(ctx, x))
    if isinstance(x, str):
        return HPComplex.parse(x).value(ctx)
    return ctx.mpc(x)


def _fmt(ctx, x, digits: int = 25) -> str:
    return ctx.nstr(x, digits)


# ----------------------------------------------------------------------


class Evaluator:
    """All analytic functions at one working precision.

    ``prec`` is the number of decimal digits the caller wants; the context
    carries extra guard digits.
    """

    def __init__(self, prec: int = 50):
        self.prec = prec
        self.ctx = context(prec)
        self.eps = self.ctx.mpf(10) ** (-(prec + GUARD_DIGITS))
        self._coeff_cache: dict = {}

    # helpers ----------------------------------------------------------
    def _tau(self, tau):
        tau = _as_mpc(self.ctx, tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        if tau.imag < MIN_IMAG:
            raise ValueError(f"Im(tau) = {float(tau.imag):.3g} is below the supported {MIN_IMAG}")
        return tau

    def _gauss_cutoff(self, y, center: float = 0.0, rate: float = 1.0) -> int:
        """N with e^{-pi*rate*y*(N - |center|)^2} below the working epsilon."""
        digits = self.prec + GUARD_DIGITS + 5
        return int(ceil(abs(center) + sqrt(digits * LN10 / (self.ctx.pi * rate * float(y))))) + 2

    def e(self, x):
        """e^{2 pi i x}."""
        return self.ctx.expjpi(2 * x)

    def _on_lattice(self, u, tau) -> bool:
        b = u.imag / tau.imag
        a = u.real - b * tau.real
        tol = self.ctx.mpf(10) ** (-(self.prec // 2))
        return abs(a - self.ctx.nint(a)) < tol and abs(b - self.ctx.nint(b)) < tol

    # q-series ---------------------------------------------------------
    def qs_eval(self, a: QSeries, tau, with_tail: bool = False):
        """sum c e^{2 pi i r tau}; optionally also |q|^T as a tail indicator."""
        ctx = self.ctx
        tau = self._tau(tau)
        key = id(a)
        coeffs = self._coeff_cache.get(key)
        if coeffs is None or coeffs[0] is not a:
            coeffs = (a, [(to_mpf(ctx, r), c.to_complex(self.prec)) for r, c in a.items()])
            self._coeff_cache[key] = coeffs
        acc = ctx.mpc(0)
        for r, c in coeffs[1]:
            acc += c * ctx.expjpi(2 * r * tau)
        if with_tail:
            tail = ctx.exp(-2 * ctx.pi * tau.imag * to_mpf(ctx, a.truncation))
            return acc, tail
        return acc

    def series_truncation(self, y, lattice_step: float = 0.5) -> Fraction:
        """Truncation T with |q|^T below the target plus a margin for coefficients."""
        digits = self.prec + GUARD_DIGITS + 5
        t0 = digits * LN10 / (2 * float(self.ctx.pi) * float(y))
        return Fraction(int(ceil(t0 * 1.1)) + 4)

    # elementary functions ---------------------------------------------
    def beta(self, x):
        x = self.ctx.mpf(x)
        if x < 0:
            raise ValueError("beta(x) needs x >= 0")
        return self.ctx.erfc(self.ctx.sqrt(self.ctx.pi * x))

    def E(self, z):
        """E(z) = 1 - erfc(sqrt(pi) z), odd in z."""
        return 1 - self.ctx.erfc(self.ctx.sqrt(self.ctx.pi) * z)

    def theta_z(self, z, tau):
        ctx = self.ctx
        tau, z = self._tau(tau), _as_mpc(ctx, z)
        y = tau.imag
        n = self._gauss_cutoff(y, float(z.imag / y))
        half = ctx.mpf(1) / 2
        acc = ctx.mpc(0)
        for k in range(-n, n):
            nu = k + half
            acc += ctx.expjpi(nu * nu * tau + 2 * nu * (z + half))
        return acc

    def theta(self, i: int, tau):
        """Half-period theta constants theta_1, theta_2, theta_3."""
        ctx = self.ctx
        tau = self._tau(tau)
        n = self._gauss_cutoff(tau.imag)
        if i in (1, 2):
            acc = ctx.mpc(1)
            for k in range(1, n + 1):
                term = 2 * ctx.expjpi(k * k * tau)
                acc += -term if (i == 2 and k % 2) else term
            return acc
        if i == 3:
            half = ctx.mpf(1) / 2
            acc = ctx.mpc(0)
            for k in range(0, n + 1):
                acc += 2 * ctx.expjpi((k + half) ** 2 * tau)
            return acc
        raise ValueError(f"theta index must be 1, 2 or 3, got {i}")

    def eta(self, tau):
        """Pentagonal-number series sum (-1)^n q^{(6n-1)^2/24}."""
        ctx = self.ctx
        tau = self._tau(tau)
        n = self._gauss_cutoff(tau.imag, rate=3.0)
        acc = ctx.mpc(0)
        for k in range(-n, n + 1):
            term = ctx.expjpi(ctx.mpf((6 * k - 1) ** 2) / 12 * tau)
            acc += -term if k % 2 else term
        return acc

    def e2(self, tau):
        ctx = self.ctx
        tau = self._tau(tau)
        q = self.e(tau)
        acc, qn, k = ctx.mpc(0), ctx.mpc(1), 0
        while True:
            k += 1
            qn *= q
            term = k * qn / (1 - qn)
            acc += term
            if abs(term) < self.eps:
                break
        return 1 - 24 * acc

    def appell(self, i: int, tau):
        """The Appell-type sums A_1, A_2, A_3 summed directly."""
        ctx = self.ctx
        tau = self._tau(tau)
        acc, k = ctx.mpc(0), 0
        while True:
            k += 1
            qn = self.e(k * tau)
            if i < 3:
                term = ctx.expjpi((k * k + 2 * k) * tau) / (1 - qn) ** 2
                if i == 2 and k % 2:
                    term = -term
            else:
                term = ctx.expjpi((k * k + k) * tau) * (1 + qn) / (1 - qn) ** 2
            acc += term
            if abs(term) < self.eps:
                return acc

    # Lerch sum and its completion --------------------------------------
    def mu(self, u, v, tau):
        ctx = self.ctx
        tau, u, v = self._tau(tau), _as_mpc(ctx, u), _as_mpc(ctx, v)
        if self._on_lattice(u, tau) or self._on_lattice(v, tau):
            raise PoleError("mu has a pole when u or v lies in Z + tau Z")
        y = tau.imag
        n = self._gauss_cutoff(y, float(abs(u.imag) / y + abs(v.imag) / y) + 2)

        def term(k):
            num = ctx.expjpi((k * k + k) * tau + 2 * k * v)
            return num / (1 - ctx.expjpi(2 * (k * tau + u)))

        acc = term(0)
        for k in range(1, n + 1):
            pair = term(k) + term(-k)  # symmetric pairing
            acc += -pair if k % 2 else pair
        return ctx.expjpi(u) / self.theta_z(v, tau) * acc

    def r(self, u, tau):
        """R(u; tau) with each bracket written through erfc for stability."""
        ctx = self.ctx
        tau, u = self._tau(tau), _as_mpc(ctx, u)
        y = tau.imag
        a = u.imag / y
        n = self._gauss_cutoff(y, float(a) + 1)
        root = ctx.sqrt(2 * y * ctx.pi)
        half = ctx.mpf(1) / 2
        acc = ctx.mpc(0)
        for k in range(-n, n):
            nu = k + half
            x = (nu + a) * root
            # sign(nu) - E(x/sqrt(pi)) without cancellation
            bracket = ctx.erfc(x) if nu > 0 else -ctx.erfc(-x)
            t = bracket * ctx.expjpi(-nu * nu * tau - 2 * nu * u)
            acc += -t if k % 2 else t
        return acc

    def mu_tilde(self, u, v, tau):
        ctx = self.ctx
        u, v = _as_mpc(ctx, u), _as_mpc(ctx, v)
        return self.mu(u, v, tau) + ctx.j / 2 * self.r(u - v, tau)

    # derivatives ------------------------------------------------------
    def step(self):
        return self.ctx.mpf(10) ** (-(self.prec // 3))

    def dds(self, f: Callable, h=None):
        """d/(2 pi i ds) at s = 0 as a Wirtinger derivative, central differences."""
        ctx = self.ctx
        h = self.step() if h is None else h
        dx = (f(h) - f(-h)) / (2 * h)
        dy = (f(ctx.j * h) - f(-ctx.j * h)) / (2 * h)
        return (dx - ctx.j * dy) / 2 / (2 * ctx.pi * ctx.j)

    # order-two derivative functions -------------------------------------
    def mu_i(self, i: int, tau, primed: bool = False):
        """mu_i (or mu'_i): derivative of mu-tilde at a point of order two."""
        tau = self._tau(tau)
        u, v = _ORDER_TWO[i](tau)
        if primed:
            return self.dds(lambda s: self.mu_tilde(u + s, v, tau))
        return self.dds(lambda s: self.mu_tilde(u, v + s, tau))

    def h_tilde_from_mu(self, i: int, tau):
        ctx = self.ctx
        tau = self._tau(tau)
        m = self.mu_i(i, tau)
        q8 = ctx.expjpi(-tau / 4)
        if i == 1:
            return q8 * m + self.theta(1, tau) ** 3 / 8
        if i == 2:
            return -ctx.j * q8 * m + self.theta(2, tau) ** 3 / 8
        return -m - self.theta(3, tau) ** 3 / 8

    # holomorphic parts and corrections ---------------------------------
    def h(self, i: int, tau, with_truncation: bool = False):
        """h_i from its exact expansion, truncated adaptively in Im(tau)."""
        tau = self._tau(tau)
        T = self.series_truncation(tau.imag)
        val = self.qs_eval(_h_cached(i, T), tau)
        return (val, T) if with_truncation else val

    def h_direct(self, i: int, tau):
        """h_i assembled from numerically summed E_2, A_i and theta_i."""
        tau = self._tau(tau)
        if i < 3:
            num = 2 + self.e2(tau) - 48 * self.appell(i, tau)
        else:
            num = -1 + self.e2(tau) - 24 * self.appell(3, tau)
        return num / (24 * self.theta(i, tau))

    def r_i(self, i: int, tau):
        """R_i from its beta-damped theta-type series."""
        ctx = self.ctx
        tau = self._tau(tau)
        y = tau.imag
        n = self._gauss_cutoff(y)
        acc = ctx.mpc(0)
        if i in (1, 2):
            for k in range(1, n + 1):
                t = 2 * k * self.beta(2 * y * k * k) * ctx.expjpi(-k * k * tau)
                acc += -t if (i == 2 and k % 2) else t
        elif i == 3:
            half = ctx.mpf(1) / 2
            for k in range(0, n + 1):
                nu = k + half
                acc += 2 * nu * self.beta(2 * y * nu * nu) * ctx.expjpi(-nu * nu * tau)
        else:
            raise ValueError(f"index must be 1, 2 or 3, got {i}")
        return acc / 2 - ctx.conj(self.theta(i, tau)) / (2 * ctx.pi * ctx.sqrt(2 * y))

    def r_i_quadrature(self, i: int, tau, scale: int = 1):
        """(1/4 pi i) conj of the period integral of theta_i(scale z) on the ray above tau.

        With z = tau + i t the kernel is (2y + t)^{-3/2}.  The constant term of
        theta_i integrates in closed form; the remainder decays like
        e^{-pi c scale (y + t)} with c = 1 (i = 1, 2) or 1/4 (i = 3).
        """
        ctx = self.ctx
        tau = self._tau(tau)
        if i not in (1, 2, 3):
            raise ValueError(f"index must be 1, 2 or 3, got {i}")
        y = tau.imag
        const = 0 if i == 3 else 1

        def integrand(t):
            z = tau + ctx.j * t
            return (self.theta(i, scale * z) - const) * ctx.j / (2 * y + t) ** ctx.mpf(1.5)

        rate = (0.25 if i == 3 else 1.0) * scale
        digits = self.prec + GUARD_DIGITS + 5
        t_cut = max(digits * LN10 / (float(ctx.pi) * rate) - float(y), 1.0)
        nodes = [0]
        b = 0.25
        while b < t_cut:
            nodes.append(b)
            b *= 2
        nodes.append(t_cut)
        val, err = ctx.quad(integrand, nodes, error=True, maxdegree=10)
        tol = ctx.mpf(10) ** (-(self.prec - 5))
        if err > tol * max(1, abs(val)):
            raise AccuracyError(f"quadrature error estimate {ctx.nstr(err, 3)} exceeds {ctx.nstr(tol, 3)}")
        total = val + const * 2 * ctx.j / ctx.sqrt(2 * y)
        return ctx.conj(total) / (4 * ctx.pi * ctx.j)

    def h_tilde(self, i: int, tau):
        return self.h(i, tau) + self.r_i(i, tau)

    def g_tilde(self, tau):
        tau = self._tau(tau)
        t2 = 2 * tau
        part = self.h_tilde(1, t2) * self.theta(1, t2) + self.h_tilde(3, t2) * self.theta(3, t2)
        return -part / 2 + (self.theta(1, tau) ** 4 + self.theta(2, tau) ** 4) / 96

    def g_holomorphic(self, tau):
        """qs_eval of the exact series g at an adaptive truncation."""
        tau = self._tau(tau)
        T = self.series_truncation(tau.imag)
        return self.qs_eval(_g_cached(T), tau)

    def r_correction(self, tau):
        """r(tau) = -(R_1 theta_1 + R_3 theta_3)(2 tau)/2."""
        t2 = 2 * self._tau(tau)
        return -(self.r_i(1, t2) * self.theta(1, t2) + self.r_i(3, t2) * self.theta(3, t2)) / 2

    def dbar(self, f: Callable, tau, h):
        """(1/2 pi i) * (1/2)(d/dx + i d/dy) by central differences."""
        ctx = self.ctx
        dx = (f(tau + h) - f(tau - h)) / (2 * h)
        dy = (f(tau + ctx.j * h) - f(tau - ctx.j * h)) / (2 * h)
        return (dx + ctx.j * dy) / 2 / (2 * ctx.pi * ctx.j)

    def shadow_value(self, tau):
        ctx = self.ctx
        tau = self._tau(tau)
        t2 = 2 * tau
        a, b = self.theta(1, t2), self.theta(3, t2)
        num = a * ctx.conj(a) + b * ctx.conj(b)
        return -num / (64 * ctx.pi ** 2 * tau.imag ** ctx.mpf(1.5))


def _order_two_points():
    half = 0.5  # exact in binary, mixes with mpmath values
    return {
        1: lambda tau: (half, tau / 2),
        2: lambda tau: (half, (1 + tau) / 2),
        3: lambda tau: (tau / 2, (1 + tau) / 2),
    }


_ORDER_TWO = _order_two_points()


@lru_cache(maxsize=64)
def _h_cached(i: int, T: Fraction) -> QSeries:
    return h_series(i, T)


@lru_cache(maxsize=16)
def _g_cached(T: Fraction) -> QSeries:
    return g_series(T)


@lru_cache(maxsize=8)
def evaluator(prec: int = 50) -> Evaluator:
    return Evaluator(prec)


# public functional interface -------------------------------------------


def qs_eval(a: QSeries, tau, prec: int = 50, with_tail: bool = False):
    return evaluator(prec).qs_eval(a, tau, with_tail)


def beta_fn(x, prec: int = 50):
    return evaluator(prec).beta(x)


def theta_z(z, tau, prec: int = 50):
    return evaluator(prec).theta_z(z, tau)


def mu_num(u, v, tau, prec: int = 50):
    return evaluator(prec).mu(u, v, tau)


def r_num(u, tau, prec: int = 50):
    return evaluator(prec).r(u, tau)


def mu_tilde_num(u, v, tau, prec: int = 50):
    return evaluator(prec).mu_tilde(u, v, tau)


def r_i_series_num(i: int, tau, prec: int = 50):
    return evaluator(prec).r_i(i, tau)


def r_i_quadrature(i: int, tau, prec: int = 50):
    return evaluator(prec).r_i_quadrature(i, tau)


def g_tilde_num(tau, prec: int = 50):
    return evaluator(prec).g_tilde(tau)


# ----------------------------------------------------------------------
# law catalog

ALGEBRAIC = "algebraic"
DERIVATIVE = "derivative"
QUADRATURE = "quadrature"


@dataclass
class LawResidual:
    law: str
    point: dict
    lhs: object
    rhs: object
    prec: int
    kind: str = ALGEBRAIC
    truncation: Fraction | None = None
    ctx: object = field(default=None, repr=False, compare=False)

    @property
    def residual(self):
        return abs(self.lhs - self.rhs)

    @property
    def scale(self):
        return max(1, abs(self.lhs), abs(self.rhs))

    @property
    def relative(self):
        return self.residual / max(abs(self.lhs), abs(self.rhs), self.ctx.mpf(10) ** (-self.prec))

    @property
    def tolerance(self):
        return tolerance(self.kind, self.prec)

    @property
    def passed(self) -> bool:
        if self.kind == ALGEBRAIC:
            return self.residual <= self.tolerance * self.scale
        return self.relative <= self.tolerance

    def to_json(self) -> dict:
        ctx = self.ctx
        out = {
            "law": self.law,
            "point": {k: _fmt(ctx, v, 20) for k, v in self.point.items()},
            "lhs": _fmt(ctx, self.lhs, 20),
            "rhs": _fmt(ctx, self.rhs, 20),
            "residual": ctx.nstr(self.residual, 3, min_fixed=1, max_fixed=0),
            "relative": ctx.nstr(self.relative, 3, min_fixed=1, max_fixed=0),
            "tolerance": f"{float(self.tolerance):.0e}",
            "kind": self.kind,
            "pass": bool(self.passed),
            "truncation": None if self.truncation is None else str(self.truncation),
            "prec": self.prec,
        }
        return out

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        pt = ", ".join(f"{k}={_fmt(self.ctx, v, 8)}" for k, v in self.point.items())
        return (f"{verdict} {self.law} [{pt}] residual={self.ctx.nstr(self.residual, 3)} "
                f"relative={self.ctx.nstr(self.relative, 3)} ({self.kind})")


def tolerance(kind: str, prec: int):
    ctx = context(prec)
    if kind == ALGEBRAIC:
        return ctx.mpf(10) ** (-(prec - 10))
    if kind == DERIVATIVE:
        return ctx.mpf(10) ** -6
    if kind == QUADRATURE:
        return ctx.mpf(10) ** -10
    raise ValueError(f"unknown tolerance class {kind!r}")


@dataclass(frozen=True)
class Law:
    variables: tuple
    kind: str
    fn: Callable  # (Evaluator, **point) -> (lhs, rhs)
    fixed_tau: str | None = None


def _p(ev, tau):
    return ev.ctx.expjpi(tau / 4)


def _mk_laws() -> dict[str, Law]:
    L: dict[str, Law] = {}
    A, D, Q = ALGEBRAIC, DERIVATIVE, QUADRATURE
    half = 0.5

    L["MU_SYM"] = Law(("tau", "u", "v"), A,
                      lambda ev, tau, u, v: (ev.mu_tilde(u, v, tau), ev.mu_tilde(v, u, tau)))
    L["MU_SYM_NEG"] = Law(("tau", "u", "v"), A,
                          lambda ev, tau, u, v: (ev.mu_tilde(u, v, tau), ev.mu_tilde(-u, -v, tau)))
    L["MU_TILDE_T"] = Law(("tau", "u", "v"), A, lambda ev, tau, u, v: (
        ev.mu_tilde(u, v, tau + 1), ev.ctx.expjpi(-0.25) * ev.mu_tilde(u, v, tau)))
    L["MU_TILDE_S"] = Law(("tau", "u", "v"), A, lambda ev, tau, u, v: (
        ev.mu_tilde(u / tau, v / tau, -1 / tau),
        -ev.ctx.expjpi(-ev.ctx.mpf(1) / 4 - (u - v) ** 2 / tau) * ev.ctx.sqrt(tau) * ev.mu_tilde(u, v, tau)))
    L["MU_TILDE_U1"] = Law(("tau", "u", "v"), A, lambda ev, tau, u, v: (
        ev.mu_tilde(u + 1, v, tau), -ev.mu_tilde(u, v, tau)))
    L["MU_TILDE_UTAU"] = Law(("tau", "u", "v"), A, lambda ev, tau, u, v: (
        ev.mu_tilde(u + tau, v, tau), -ev.ctx.expjpi(2 * (u - v) + tau) * ev.mu_tilde(u, v, tau)))

    def shifted_difference(tilde):
        def fn(ev, tau, u, v, z):
            f = ev.mu_tilde if tilde else ev.mu
            th = lambda w: ev.theta_z(w, tau)
            rhs = ev.ctx.j * ev.eta(tau) ** 3 * th(u + v + z) * th(z) / (th(u) * th(v) * th(u + z) * th(v + z))
            return f(u + z, v + z, tau) - f(u, v, tau), rhs
        return fn

    L["MU3_PLUS"] = Law(("tau", "u", "v", "z"), A, shifted_difference(False))
    L["MU3_PLUS_TILDE"] = Law(("tau", "u", "v", "z"), A, shifted_difference(True))

    for i in (1, 2, 3):
        L[f"MU_VANISH_{i}"] = Law(("tau",), A, lambda ev, tau, i=i: (
            ev.mu_tilde(*_ORDER_TWO[i](tau), tau), ev.ctx.mpc(0)))

    L["MU_VALUE_1"] = Law(("tau",), A, lambda ev, tau: (ev.mu(half, tau / 2, tau), -_p(ev, tau) / 2))
    L["MU_VALUE_2"] = Law(("tau",), A, lambda ev, tau: (
        ev.mu(half, (1 + tau) / 2, tau), -ev.ctx.j * _p(ev, tau) / 2))
    L["MU_VALUE_3"] = Law(("tau",), A, lambda ev, tau: (
        ev.mu(tau / 2, (1 + tau) / 2, tau), ev.ctx.mpc(0)))
    L["R_VALUE_1"] = Law(("tau",), A, lambda ev, tau: (ev.r((1 - tau) / 2, tau), -ev.ctx.j * _p(ev, tau)))
    L["R_VALUE_2"] = Law(("tau",), A, lambda ev, tau: (ev.r(-tau / 2, tau), _p(ev, tau)))
    L["R_VALUE_3"] = Law(("tau",), A, lambda ev, tau: (ev.r(-half, tau), ev.ctx.mpc(0)))

    musum_rhs = {
        1: lambda ev, tau: -_p(ev, tau) * ev.theta(1, tau) ** 3 / 4,
        2: lambda ev, tau: -ev.ctx.j * _p(ev, tau) * ev.theta(2, tau) ** 3 / 4,
        3: lambda ev, tau: -ev.theta(3, tau) ** 3 / 4,
    }
    for i in (1, 2, 3):
        L[f"MUSUM_{i}"] = Law(("tau",), D, lambda ev, tau, i=i: (
            ev.mu_i(i, tau) + ev.mu_i(i, tau, primed=True), musum_rhs[i](ev, tau)))

    # h-tilde table: T maps 1 -> 2, 2 -> 1, 3 -> 3 (with e^{-pi i/4}); S maps 1 -> 1, 2 -> 3, 3 -> 2
    t_target = {1: (2, 0), 2: (1, 0), 3: (3, -0.25)}
    s_target = {1: 1, 2: 3, 3: 2}
    for i in (1, 2, 3):
        j, ph = t_target[i]
        L[f"HTILDE_T_{i}"] = Law(("tau",), A, lambda ev, tau, i=i, j=j, ph=ph: (
            ev.h_tilde(i, tau + 1), ev.ctx.expjpi(ph) * ev.h_tilde(j, tau)))
        L[f"HTILDE_S_{i}"] = Law(("tau",), A, lambda ev, tau, i=i: (
            ev.h_tilde(i, -1 / tau),
            ev.ctx.expjpi(0.25) * ev.ctx.power(tau, ev.ctx.mpf(1.5)) * ev.h_tilde(s_target[i], tau)))
        L[f"HTILDE_DECOMP_{i}"] = Law(("tau",), D, lambda ev, tau, i=i: (
            ev.h_tilde_from_mu(i, tau), ev.h(i, tau) + ev.r_i(i, tau)))

    def r_deriv(i):
        def fn(ev, tau):
            ctx = ev.ctx
            y = tau.imag
            c = ctx.pi * ctx.sqrt(2 * y)
            u = {1: (1 - tau) / 2, 2: -tau / 2, 3: ctx.mpc(-0.5)}[i]
            lhs = ev.dds(lambda s: ev.r(u - s, tau))
            # the bilateral |n| sums are twice the one-sided sums inside R_i
            s_i = 2 * (ev.r_i(i, tau) + ctx.conj(ev.theta(i, tau)) / (2 * c))
            if i == 1:
                rhs = -ctx.j * _p(ev, tau) * (s_i + half - ctx.conj(ev.theta(1, tau)) / c)
            elif i == 2:
                rhs = _p(ev, tau) * (s_i + half - ctx.conj(ev.theta(2, tau)) / c)
            else:
                rhs = ctx.j * (s_i - ctx.conj(ev.theta(3, tau)) / c)
            return lhs, rhs
        return fn

    def mu_deriv(i):
        def fn(ev, tau):
            ctx = ev.ctx
            u, v = _ORDER_TWO[i](tau)
            lhs = ev.dds(lambda s: ev.mu(u, v + s, tau))
            th, e2, a = ev.theta(i, tau), ev.e2(tau), ev.appell(i, tau)
            if i == 1:
                rhs = -_p(ev, tau) / (24 * th) * (-2 + 6 * th + 3 * th ** 4 - e2 + 48 * a)
            elif i == 2:
                rhs = -ctx.j * _p(ev, tau) / (24 * th) * (-2 + 6 * th + 3 * th ** 4 - e2 + 48 * a)
            else:
                rhs = (1 - 3 * th ** 4 - e2 + 24 * a) / (24 * th)
            return lhs, rhs
        return fn

    for i in (1, 2, 3):
        L[f"R_DERIV_{i}"] = Law(("tau",), D, r_deriv(i))
        L[f"MU_DERIV_{i}"] = Law(("tau",), D, mu_deriv(i))
        L[f"R_QUAD_{i}"] = Law(("tau",), Q, lambda ev, tau, i=i: (ev.r_i_quadrature(i, tau), ev.r_i(i, tau)))
        # conj(4 pi i R_i(4 tau)) = (1/2) * integral of theta_i(4z) on the ray above tau
        L[f"R_QUAD_RESCALE_{i}"] = Law(("tau",), Q, lambda ev, tau, i=i: (
            ev.r_i_quadrature(i, tau, scale=4) / 2, ev.r_i(i, 4 * tau)))
        L[f"H_SERIES_{i}"] = Law(("tau",), A, lambda ev, tau, i=i: (ev.h(i, tau), ev.h_direct(i, tau)))

    def r_combo(ev, tau):
        t4 = 4 * tau
        lhs = ev.r_i(1, tau) * ev.theta(1, tau) + ev.r_i(2, tau) * ev.theta(2, tau) \
            - 4 * (ev.r_i(1, t4) * ev.theta(1, t4) + ev.r_i(3, t4) * ev.theta(3, t4))
        return lhs, ev.ctx.mpc(0)

    L["R_COMBO_ZERO"] = Law(("tau",), A, r_combo)
    L["G_MODULAR_T"] = Law(("tau",), A, lambda ev, tau: (ev.g_tilde(tau + 1), ev.g_tilde(tau)))
    L["G_MODULAR_S"] = Law(("tau",), A, lambda ev, tau: (ev.g_tilde(-1 / tau), tau ** 2 * ev.g_tilde(tau)))
    L["G_AT_I"] = Law(("tau",), A, lambda ev, tau: (ev.g_tilde(tau), ev.ctx.mpc(0)), fixed_tau="1i")
    L["G_HOLOMORPHIC"] = Law(("tau",), A, lambda ev, tau: (
        ev.g_tilde(tau) - ev.r_correction(tau), ev.g_holomorphic(tau)))
    L["SHADOW"] = Law(("tau",), D, lambda ev, tau: (
        ev.dbar(ev.g_tilde, tau, ev.step()), ev.shadow_value(tau)))
    return L


LAWS = _mk_laws()

#: Laws exercised by the acceptance suite at 5 random points each.
CORE_LAWS = (
    "MU_SYM", "MU_SYM_NEG", "MU_TILDE_T", "MU_TILDE_S", "MU_TILDE_U1", "MU_TILDE_UTAU",
    "MU3_PLUS", "MU3_PLUS_TILDE",
    "MU_VANISH_1", "MU_VANISH_2", "MU_VANISH_3",
    "MU_VALUE_1", "MU_VALUE_2", "MU_VALUE_3", "R_VALUE_1", "R_VALUE_2", "R_VALUE_3",
    "HTILDE_T_1", "HTILDE_T_2", "HTILDE_T_3", "HTILDE_S_1", "HTILDE_S_2", "HTILDE_S_3",
    "HTILDE_DECOMP_1", "HTILDE_DECOMP_2", "HTILDE_DECOMP_3",
    "R_COMBO_ZERO", "G_MODULAR_T", "G_MODULAR_S",
)


def random_points(law: str, m: int, seed: int = 0, prec: int = 50) -> list[dict]:
    """Seeded admissible points: x in [-1/2, 1/2], y in [1/2, 2]; u, v, z inside the cell."""
    spec = _law(law)
    ctx = context(prec)
    rng = random.Random(f"{seed}:{law}")
    pts = []
    for _ in range(m):
        if spec.fixed_tau is not None:
            tau = HPComplex.parse(spec.fixed_tau, prec).value(ctx)
        else:
            tau = ctx.mpc(ctx.mpf(rng.uniform(-0.5, 0.5)), ctx.mpf(rng.uniform(0.5, 2.0)))
        pt = {"tau": tau}
        for name in spec.variables[1:]:
            pt[name] = _cell_point(ctx, rng, tau, small=(name == "z"))
        pts.append(pt)
    return pts


def _cell_point(ctx, rng, tau, small: bool):
    """a + b tau with a, b kept away from the integers."""
    lo, hi = (0.05, 0.2) if small else (0.1, 0.9)
    a = rng.uniform(lo, hi) * rng.choice((-1, 1))
    b = rng.uniform(lo, hi) * rng.choice((-1, 1))
    return ctx.mpf(a) + ctx.mpf(b) * tau


def _law(law: str) -> Law:
    try:
        return LAWS[law]
    except KeyError:
        raise ValueError(f"unknown law {law!r}") from None


def law_check(law: str, points: list[dict] | None = None, prec: int = 50,
              m: int = 5, seed: int = 0) -> list[LawResidual]:
    """Evaluate ``law`` at the given points (or ``m`` seeded random ones)."""
    spec = _law(law)
    ev = evaluator(prec)
    ctx = ev.ctx
    if points is None:
        points = random_points(law, m, seed, prec)
    out = []
    for pt in points:
        missing = [v for v in spec.variables if v not in pt]
        if missing:
            raise ValueError(f"law {law} needs the variables {missing}")
        vals = {k: _as_mpc(ctx, pt[k]) for k in spec.variables}
        ev._tau(vals["tau"])  # domain check
        lhs, rhs = spec.fn(ev, **vals)
        trunc = ev.series_truncation(vals["tau"].imag) if _uses_series(law) else None
        out.append(LawResidual(law, vals, ctx.mpc(lhs), ctx.mpc(rhs), prec, spec.kind, trunc, ctx))
    return out


def _uses_series(law: str) -> bool:
    return law.startswith(("HTILDE", "G_", "H_SERIES", "SHADOW"))


def shadow_check(tau, prec: int = 50, step=None) -> LawResidual:
    """Finite-difference D-bar of g-tilde against the closed-form shadow."""
    ev = evaluator(prec)
    ctx = ev.ctx
    tau = ev._tau(tau)
    h = ev.step() if step is None else ctx.mpf(step)
    if h >= tau.imag / 10:
        raise ConditioningError("finite-difference step too large relative to Im(tau)")
    rounding = ctx.mpf(10) ** (-(prec + GUARD_DIGITS)) / h
    if rounding > ctx.mpf(10) ** -8:
        raise ConditioningError("finite-difference step too small for the working precision")
    lhs = ev.dbar(ev.g_tilde, tau, h)
    return LawResidual("SHADOW", {"tau": tau}, lhs, ev.shadow_value(tau), prec, DERIVATIVE,
                       ev.series_truncation(tau.imag / 2), ctx)
