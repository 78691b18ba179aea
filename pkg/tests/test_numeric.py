from __future__ import annotations

import json

import mpmath
import pytest

from qmock.errors import AccuracyError, ConditioningError, PoleError
from qmock.forms import eta
from qmock.lerch import g_series
from qmock.numeric import (ALGEBRAIC, CORE_LAWS, DERIVATIVE, LAWS, HPComplex, beta_fn, evaluator,
                           g_tilde_num, law_check, mu_num, mu_tilde_num, qs_eval, r_i_quadrature,
                           r_i_series_num, r_num, random_points, shadow_check, theta_z, tolerance)
from qmock.qseries import QSeries

PREC = 30
mp = mpmath.mp.clone()
mp.dps = PREC + 10
TAU = mp.mpc("0.2", "0.9")


def close(a, b, digits=PREC - 10):
    return abs(a - b) <= mp.mpf(10) ** (-digits) * max(1, abs(b))


def test_hpcomplex_parse():
    p = HPComplex.parse("0.5+1.0i")
    assert (p.re, p.im) == ("0.5", "1.0")
    assert HPComplex.parse("1.5i").re == "0" and HPComplex.parse("-i").im == "-1"
    assert HPComplex.parse("2").im == "0"
    assert HPComplex.parse("1e-3-2.5e-1i").im == "-2.5e-1"
    with pytest.raises(ValueError):
        HPComplex.parse("abc")
    with pytest.raises(ValueError):
        HPComplex("1", "1", prec=5)


def test_eta_at_i_classical_value():
    prec = 50
    ctx = mpmath.mp.clone()
    ctx.dps = prec + 10
    expected = ctx.gamma(ctx.mpf(1) / 4) / (2 * ctx.pi ** (ctx.mpf(3) / 4))
    val = qs_eval(eta(30), "1i", prec)
    assert abs(abs(val) - expected) < ctx.mpf(10) ** (-(prec - 5))
    assert abs(evaluator(prec).eta(ctx.mpc(0, 1)) - expected) < ctx.mpf(10) ** (-(prec - 5))


def test_qs_eval_elementary():
    assert qs_eval(QSeries.constant(1, 5), "0.3+0.7i", PREC) == 1
    val, tail = evaluator(PREC).qs_eval(QSeries.monomial(1, 5), mp.mpc(0, 1), with_tail=True)
    assert close(val, mp.exp(-2 * mp.pi))
    assert close(tail, mp.exp(-10 * mp.pi))


def test_qs_eval_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        qs_eval(eta(5), "0.1-0.5i", PREC)
    with pytest.raises(ValueError):
        qs_eval(eta(5), "0.1+0.0001i", PREC)


def test_beta_properties():
    ev = evaluator(PREC)
    assert beta_fn(0, PREC) == 1
    for x in ("0.1", "0.7", "2.5"):
        assert close(ev.beta(x) + ev.E(mp.sqrt(mp.mpf(x))), 1)
    vals = [beta_fn(x, PREC) for x in (0.5, 1, 2, 4, 8)]
    assert all(a > b for a, b in zip(vals, vals[1:])) and vals[-1] < 1e-10
    with pytest.raises(ValueError):
        beta_fn(-1, PREC)


def test_beta_against_integral():
    ev = evaluator(PREC)
    x = mp.mpf("0.3")
    integral = mp.quad(lambda t: t ** mp.mpf(-0.5) * mp.exp(-mp.pi * t), [x, 1, mp.inf])
    assert close(ev.beta(x), integral, 20)


def test_theta_z_properties():
    ev = evaluator(PREC)
    assert close(theta_z(0.5, TAU, PREC), -ev.theta(3, TAU))
    assert abs(theta_z(0, TAU, PREC)) < mp.mpf(10) ** (-(PREC - 5))
    z = mp.mpc("0.13", "0.21")
    assert close(theta_z(z + 1, TAU, PREC), -theta_z(z, TAU, PREC))
    assert close(theta_z(-z, TAU, PREC), -theta_z(z, TAU, PREC))
    p = mp.expjpi(-TAU / 4)
    assert close(theta_z(TAU / 2, TAU, PREC), -1j * p * ev.theta(2, TAU))
    assert close(theta_z((1 + TAU) / 2, TAU, PREC), -p * ev.theta(1, TAU))


def test_theta_derivative_at_zero():
    ev = evaluator(PREC)
    d = ev.dds(lambda s: ev.theta_z(s, TAU))
    assert abs(d - 1j * ev.eta(TAU) ** 3) < 1e-8


def test_theta_product_and_eta():
    ev = evaluator(PREC)
    prod = ev.theta(1, TAU) * ev.theta(2, TAU) * ev.theta(3, TAU)
    assert close(prod, 2 * ev.eta(TAU) ** 3)


def test_mu_special_values_and_symmetry():
    half = 0.5
    p = mp.expjpi(TAU / 4)
    assert close(mu_num(half, TAU / 2, TAU, PREC), -p / 2)
    assert abs(mu_num(TAU / 2, (1 + TAU) / 2, TAU, PREC)) < mp.mpf(10) ** (-(PREC - 10))
    assert abs(mu_tilde_num(half, TAU / 2, TAU, PREC)) < mp.mpf(10) ** (-(PREC - 10))
    u, v = mp.mpc("0.31", "0.12"), mp.mpc("-0.2", "0.4")
    assert close(mu_num(u, v, TAU, PREC), mu_num(v, u, TAU, PREC))


def test_mu_pole():
    with pytest.raises(PoleError):
        mu_num(TAU, 0.3, TAU, PREC)
    with pytest.raises(PoleError):
        mu_num(0.3, 1, TAU, PREC)


def test_r_values():
    p = mp.expjpi(TAU / 4)
    assert close(r_num((1 - TAU) / 2, TAU, PREC), -1j * p)
    assert abs(r_num(-0.5, TAU, PREC)) < mp.mpf(10) ** (-(PREC - 10))
    z = mp.mpc("0.17", "-0.3")
    assert close(r_num(z, TAU, PREC), r_num(-z, TAU, PREC))


def test_r1_real_on_imaginary_axis():
    for y in ("0.6", "1.3"):
        v = r_i_series_num(1, mp.mpc(0, y), PREC)
        assert abs(v.imag) < mp.mpf(10) ** (-(PREC - 5)) * max(1, abs(v))


def test_r_series_against_quadrature():
    for i in (1, 2, 3):
        a, b = r_i_series_num(i, TAU, PREC), r_i_quadrature(i, TAU, PREC)
        assert abs(a - b) < 1e-10 * max(1, abs(a))


def test_h_exact_series_against_direct_sums():
    ev = evaluator(PREC)
    for i in (1, 2, 3):
        assert close(ev.h(i, TAU), ev.h_direct(i, TAU))


def test_g_tilde():
    assert abs(g_tilde_num("1i", PREC)) < 1e-15
    ev = evaluator(PREC)
    assert close(ev.g_tilde(TAU) - ev.r_correction(TAU), ev.qs_eval(g_series(40), TAU))


def test_shadow_check_and_sign():
    res = shadow_check("1i", 50, step=1e-8)
    assert res.relative < 1e-6
    ev = evaluator(PREC)
    for y in ("0.7", "1.5"):
        s = ev.shadow_value(mp.mpc(0, y))
        assert abs(s.imag) < 1e-25 and s.real < 0


def test_holomorphic_function_has_no_shadow():
    ev = evaluator(PREC)
    val = ev.dbar(ev.g_holomorphic, TAU, ev.step())
    assert abs(val) < 1e-8


def test_shadow_conditioning_errors():
    with pytest.raises(ConditioningError):
        shadow_check("1i", PREC, step=0.5)
    with pytest.raises(ConditioningError):
        shadow_check("1i", PREC, step=1e-40)
    assert issubclass(ConditioningError, AccuracyError)


def test_tolerance_classes():
    assert float(tolerance(ALGEBRAIC, 50)) == pytest.approx(1e-40)
    assert float(tolerance(DERIVATIVE, 50)) == pytest.approx(1e-6)
    with pytest.raises(ValueError):
        tolerance("other", 50)


def test_random_points_are_seeded_and_admissible():
    a = random_points("MU3_PLUS", 4, seed=3)
    b = random_points("MU3_PLUS", 4, seed=3)
    assert [str(p["u"]) for p in a] == [str(p["u"]) for p in b]
    assert a[0]["tau"] != random_points("MU3_PLUS", 1, seed=4)[0]["tau"]
    for p in a:
        assert -0.5 <= p["tau"].real <= 0.5 and 0.5 <= p["tau"].imag <= 2
    assert random_points("G_AT_I", 1)[0]["tau"] == mp.mpc(0, 1)


def test_law_check_errors():
    with pytest.raises(ValueError):
        law_check("NOPE")
    with pytest.raises(ValueError):
        law_check("MU_SYM", [{"tau": TAU}], PREC)


def test_law_residual_json():
    res = law_check("G_MODULAR_S", [{"tau": HPComplex.parse("0.5+1.0i")}], 50)[0]
    data = res.to_json()
    assert {"law", "point", "residual", "truncation", "prec", "pass"} <= set(data)
    assert data["prec"] == 50 and data["pass"] is True and data["truncation"] is not None
    json.dumps(data)
    assert float(data["residual"]) < 1e-15
    assert res.residual == abs(res.lhs - res.rhs)


CHEAP = [law for law in LAWS if not law.startswith(("R_QUAD", "SHADOW"))]


@pytest.mark.parametrize("law", CHEAP)
def test_every_law_at_one_point(law):
    (res,) = law_check(law, None, PREC, m=1, seed=11)
    assert res.passed, res.line()


@pytest.mark.slow
@pytest.mark.parametrize("law", [law for law in LAWS if law not in CHEAP])
def test_quadrature_and_shadow_laws(law):
    (res,) = law_check(law, None, PREC, m=1, seed=11)
    assert res.passed, res.line()


def test_core_laws_are_registered():
    assert set(CORE_LAWS) <= set(LAWS)
    for need in ("MUSUM_1", "MU_DERIV_3", "R_DERIV_2", "R_QUAD_3", "SHADOW", "G_AT_I"):
        assert need in LAWS
