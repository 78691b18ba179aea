"""Acceptance suite: one verdict line per criterion, tolerances pinned below.

Run with ``pytest tests/test_acceptance.py`` (the verdicts appear in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import time
from fractions import Fraction as F
from math import isqrt

import mpmath

from qmock import forms, lerch
from qmock.catalog import verify_identity
from qmock.joyce import (CANONICAL_NORMALIZATION, JoyceParams, curly_jk_series,
                         determine_canonical_normalization, duality_check, joyce_closed, joyce_sum,
                         qexp_recursion_check, residue_at_one, zeta_residue_partial)
from qmock.numeric import CORE_LAWS, evaluator, law_check

# pinned tolerances and sizes
C1_RUNTIME = 1.0
C2_ORDER, C2_RUNTIME = 40, 60.0
C3_N, C3_RES_N, C3_ZETA_N, C3_TOL = 10, 20, 1000, 1e-5
C4_KS, C4_ORDER = (2, 4, 6), 30
C5_N = 200
C6_PREC, C6_POINTS, C6_TOL, C6_RUNTIME = 50, 5, 1e-15, 300.0
C7_PREC, C7_POINTS, C7_TOL = 40, 3, 1e-10
C8_PREC, C8_POINTS, C8_TOL = 50, 3, 1e-6
C9_PREC, C9_POINTS, C9_TOL = 50, 3, 1e-6

CATALOG_IDS = (
    "ETA_TRIPLE", "THETA_FROM_ETA_1", "THETA_FROM_ETA_2", "THETA_FROM_ETA_3", "THETA_TRIPLE",
    "E2_ETA_LOGDERIV", "E2_HALFARG_1", "E2_HALFARG_2", "E2_DOUBLE", "JACOBI_QUARTIC",
    "THETA_4TAU", "THETA_QUARTER", "APPELL_DOUBLE_1", "APPELL_DOUBLE_2", "APPELL_DOUBLE_3",
    "APPELL_COMBINE_4TAU", "APPELL_COMBINE_ODD", "LOGDERIV_1", "LOGDERIV_2", "LOGDERIV_3",
    "H_COMBINATION", "G_FOURIER", "G_EQUALS_CURLYJ",
)

# the expansions as displayed for eta, the three thetas and E_2
PRINTED = {
    "eta": {F(1, 24): 1, F(25, 24): -1, F(49, 24): -1, F(121, 24): 1, F(169, 24): 1},
    "theta1": {F(0): 1, F(1, 2): 2, F(2): 2, F(9, 2): 2, F(8): 2},
    "theta2": {F(0): 1, F(1, 2): -2, F(2): 2, F(9, 2): -2, F(8): 2},
    "theta3": {F(1, 8): 2, F(9, 8): 2, F(25, 8): 2, F(49, 8): 2},
    "E2": {F(0): 1, F(1): -24, F(2): -72, F(3): -96},
}


def _sigma_prime_brute(n: int) -> F:
    total = F(sum(a for a in range(1, n + 1) if n % a == 0 and a * a > n))
    r = isqrt(n)
    return total + (F(r, 2) if r * r == n else 0)


def test_criterion_1_printed_expansions(criterion):
    for fn in (forms.eta, forms.theta, forms.eisenstein):
        fn.cache_clear()
    start = time.perf_counter()
    built = {"eta": forms.eta(8), "theta1": forms.theta(1, 9), "theta2": forms.theta(2, 9),
             "theta3": forms.theta(3, 7), "E2": forms.eisenstein(2, 4)}
    bad = []
    for name, printed in PRINTED.items():
        s = built[name]
        # every printed coefficient, and nothing else below the last printed exponent
        for r in sorted(set(printed) | {e for e, _ in s.items() if e <= max(printed)}):
            if s.coeff(r) != printed.get(r, 0):
                bad.append(f"{name}@{r}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < C1_RUNTIME
    criterion(1, ok, f"printed coefficients mismatched={bad or 'none'} runtime={elapsed:.3f}s (< {C1_RUNTIME}s)")
    assert ok


def test_criterion_2_exact_identity_suite(criterion):
    start = time.perf_counter()
    reports = [verify_identity(i, C2_ORDER) for i in CATALOG_IDS]
    elapsed = time.perf_counter() - start
    failing = [r.line() for r in reports if not r.passed]
    ok = not failing and elapsed < C2_RUNTIME
    criterion(2, ok, f"{len(reports) - len(failing)}/{len(reports)} identities pass at T={C2_ORDER}, "
                     f"runtime={elapsed:.1f}s (< {C2_RUNTIME}s); failing: {failing or 'none'}")
    assert ok, failing


def test_criterion_3_joyce_algebra(criterion):
    comp = all(joyce_sum(JoyceParams(2, n)) == joyce_closed(n) for n in range(1, C3_N + 1))
    rec = qexp_recursion_check(C3_N).passed
    res = all(residue_at_one(joyce_closed(n)) == F(-1, n * n) for n in range(1, C3_RES_N + 1))
    partial = zeta_residue_partial(2, C3_ZETA_N)
    ctx = mpmath.mp.clone()
    ctx.dps = 30
    # residues are -1/n^2, so the partial sum approaches -zeta(4)
    diff = abs(ctx.mpf(partial.numerator) / partial.denominator + ctx.zeta(4))
    ok = comp and rec and res and diff < C3_TOL
    criterion(3, ok, f"composition sums n<={C3_N}: {comp}; qexp recursion: {rec}; "
                     f"residues n<={C3_RES_N}: {res}; |partial + zeta(4)| = {float(diff):.2e} (< {C3_TOL})")
    assert ok


def test_criterion_4_duality(criterion):
    reports = [duality_check(k, C4_ORDER) for k in C4_KS]
    canonical = determine_canonical_normalization(C4_ORDER, C4_KS)
    ok = all(r.passed for r in reports) and canonical == CANONICAL_NORMALIZATION
    criterion(4, ok, f"k in {C4_KS} at order {C4_ORDER}: {[r.passed for r in reports]}; "
                     f"normalization that passes: {canonical}")
    assert ok


def test_criterion_5_mock_fourier_law(criterion):
    g = lerch.g_series(C5_N + 1)
    sigma_ok = g.coeff(0) == F(-1, 24) and all(
        g.coeff(n) == _sigma_prime_brute(n) for n in range(1, C5_N + 1))
    curly = curly_jk_series(-2, C5_N + 1, CANONICAL_NORMALIZATION)
    m = g.first_mismatch(curly, C5_N + F(1, 2))
    curly_ok = m is None
    where = "none" if m is None else f"q^{m[0]}: g={m[1]} vs curlyJ_-2={m[2]}"
    ok = sigma_ok and curly_ok
    criterion(5, ok, f"g = -1/24 + sum sigma'(n) q^n for n<={C5_N}: {sigma_ok}; "
                     f"g = canonical curlyJ_-2 to {C5_N}: {curly_ok} (first mismatch {where})")
    assert ok


def test_criterion_6_numerical_law_suite(criterion):
    start = time.perf_counter()
    worst, failing = 0.0, []
    for law in CORE_LAWS:
        for res in law_check(law, None, C6_PREC, m=C6_POINTS, seed=0):
            r = float(res.residual)
            worst = max(worst, r)
            if not r < C6_TOL:
                failing.append(f"{law}:{r:.2e}")
    gi = abs(evaluator(C6_PREC).g_tilde(mpmath.mpc(0, 1)))
    elapsed = time.perf_counter() - start
    ok = not failing and gi < C6_TOL and elapsed < C6_RUNTIME
    criterion(6, ok, f"{len(CORE_LAWS)} laws x {C6_POINTS} points at prec {C6_PREC}: worst residual "
                     f"{worst:.2e}; |g~(i)| = {float(gi):.2e} (< {C6_TOL}); runtime {elapsed:.0f}s; "
                     f"failing: {failing or 'none'}")
    assert ok


def test_criterion_7_integral_representation(criterion):
    worst, ok = 0.0, True
    for i in (1, 2, 3):
        for res in law_check(f"R_QUAD_{i}", None, C7_PREC, m=C7_POINTS, seed=0):
            err = float(res.residual / max(1, abs(res.rhs)))
            worst = max(worst, err)
            ok &= err < C7_TOL
    criterion(7, ok, f"R_i series vs quadrature, i=1..3, {C7_POINTS} points: worst {worst:.2e} (< {C7_TOL})")
    assert ok


def test_criterion_8_shadow(criterion):
    results = law_check("SHADOW", None, C8_PREC, m=C8_POINTS, seed=0)
    worst = max(float(r.relative) for r in results)
    ok = worst < C8_TOL
    criterion(8, ok, f"finite-difference dbar g~ vs closed form, {C8_POINTS} points: worst relative "
                     f"{worst:.2e} (< {C8_TOL})")
    assert ok


def test_criterion_9_derivative_laws(criterion):
    worst, failing = 0.0, []
    for law in ("MU_DERIV_1", "MU_DERIV_2", "MU_DERIV_3", "R_DERIV_1", "R_DERIV_2", "R_DERIV_3"):
        for res in law_check(law, None, C9_PREC, m=C9_POINTS, seed=0):
            rel = float(res.relative)
            worst = max(worst, rel)
            if not rel < C9_TOL:
                failing.append(f"{law}:{rel:.2e}")
    ok = not failing
    criterion(9, ok, f"MU_DERIV_1-3 and R_DERIV_1-3, {C9_POINTS} points: worst relative {worst:.2e} "
                     f"(< {C9_TOL}); failing: {failing or 'none'}")
    assert ok


if __name__ == "__main__":
    import sys

    def record(number, passed, detail):
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
        return passed

    status = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn(record)
            except AssertionError:
                status = 1
    sys.exit(status)
