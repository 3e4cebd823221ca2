"""The t^j e^{ikt} algebra: products, integration from zero, evaluations."""

import math
import random

import mpmath
import pytest

from polycenters.parampoly import ParamPoly, parse_poly
from polycenters.rationals import GR_ONE, GaussianRational, RAT
from polycenters.timealgebra import (
    PeriodSpec,
    TimeExpr,
    eval_at_omega,
    integrate0,
    parse_coefficient,
    texpr_mul,
)


def test_double_angle_product():
    c = TimeExpr.cos_t()
    sq = texpr_mul(c, c)
    expected = (
        TimeExpr.constant(GaussianRational(RAT(1, 2)))
        + TimeExpr.exp_t(2, GaussianRational(RAT(1, 4)))
        + TimeExpr.exp_t(-2, GaussianRational(RAT(1, 4)))
    )
    assert sq == expected


def test_t_power_product():
    assert texpr_mul(TimeExpr.t_power(1), TimeExpr.t_power(2)) == TimeExpr.t_power(3)


def test_trig_product_mean_value():
    # (a cos + b sin)(c cos + d sin) has mean (ac+bd)/2: integral over 2pi is pi(ac+bd)
    a, b, c, d = (ParamPoly.variable(n) for n in "abcd")
    B = TimeExpr.cos_t() * a + TimeExpr.sin_t() * b
    A = TimeExpr.cos_t() * c + TimeExpr.sin_t() * d
    integral = (B * A).integrate0().eval_at_omega(PeriodSpec.two_pi())
    assert integral == parse_poly("pi*a*c+pi*b*d")
    # quadrature oracle at a concrete point
    vals = {"a": 0.7, "b": -1.3, "c": 0.4, "d": 2.1}
    f = lambda t: (B * A).eval_numeric(t, vals)  # noqa: E731
    quad = mpmath.quad(lambda t: f(float(t)), [0, 2 * mpmath.pi])
    assert abs(complex(quad) - integral.eval_complex({**vals, "pi": math.pi})) < 1e-10


def test_integrate_polynomial_and_exponential():
    assert integrate0(TimeExpr.t_power(2)) == TimeExpr.t_power(3) * GaussianRational(RAT(1, 3))
    k = 3
    F = integrate0(TimeExpr.exp_t(k))
    # (e^{ikt} - 1)/(ik)
    inv = GaussianRational(RAT(0), RAT(-1, k))
    assert F == TimeExpr.exp_t(k, inv) - TimeExpr.constant(inv)
    assert abs(F.eval_numeric(0.0)) == 0


def _random_texpr(rng, with_params=True):
    t = TimeExpr.zero()
    for _ in range(rng.randint(1, 5)):
        j, k = rng.randint(0, 3), rng.randint(-3, 3)
        coef = GaussianRational(
            RAT(rng.randint(-5, 5), rng.randint(1, 4)),
            RAT(rng.randint(-5, 5), rng.randint(1, 3)),
        )
        p = ParamPoly.constant(coef)
        if with_params and rng.random() < 0.5:
            p = p * ParamPoly.variable("a")
        t = t + TimeExpr.from_poly(p) * TimeExpr((), {(j, k, ()): GR_ONE}, _checked=True)
    return t


def test_differentiate_inverts_integrate0():
    rng = random.Random(3)
    for _ in range(1000):
        f = _random_texpr(rng)
        assert f.integrate0().differentiate() == f


def test_integral_matches_quadrature():
    rng = random.Random(5)
    w = PeriodSpec.two_pi()
    for _ in range(25):
        f = _random_texpr(rng, with_params=False)
        exact = f.integrate0().eval_at_omega(w)
        val = exact.eval_complex({"pi": math.pi})
        quad = mpmath.quad(lambda t: f.eval_numeric(float(t)), [0, 2 * mpmath.pi])
        ref = complex(quad)
        assert abs(val - ref) <= 1e-10 * max(1.0, abs(ref))


def test_eval_at_omega_examples():
    w1 = PeriodSpec.rational(1)
    third = TimeExpr.t_power(3) * GaussianRational(RAT(1, 3))
    assert third.eval_at_omega(w1) == ParamPoly.constant(GaussianRational(RAT(1, 3)))
    f = integrate0(TimeExpr.exp_t(1))
    assert f.eval_at_omega(PeriodSpec.two_pi()).is_zero
    # zero-mean trig integrates to zero over a full period
    B = TimeExpr.cos_t() * ParamPoly.variable("a") + TimeExpr.sin_t() * ParamPoly.variable("b")
    assert B.integrate0().eval_at_omega(PeriodSpec.two_pi()).is_zero


def test_trig_eval_requires_full_turns():
    f = TimeExpr.exp_t(1)
    with pytest.raises(ValueError, match="irrational evaluation unsupported"):
        f.eval_at_omega(PeriodSpec.rational(1))
    with pytest.raises(ValueError, match="irrational evaluation unsupported"):
        f.eval_at_omega(PeriodSpec.pi_multiple(1))


def test_eval_numeric_examples():
    assert TimeExpr.t_power(2).eval_numeric(2.0) == 4.0
    assert abs(TimeExpr.cos_t().eval_numeric(math.pi) + 1) < 1e-15
    g = TimeExpr.cos_t() * ParamPoly.variable("a")
    assert g.eval_numeric(0.0, {"a": 3 + 1j}) == 3 + 1j
    with pytest.raises(KeyError, match="unbound"):
        g.eval_numeric(0.0, {})


def test_product_evaluation_consistency():
    rng = random.Random(11)
    for _ in range(50):
        f, g = _random_texpr(rng), _random_texpr(rng)
        t = rng.uniform(0, 6)
        params = {"a": complex(rng.uniform(-2, 2), rng.uniform(-2, 2))}
        lhs = (f * g).eval_numeric(t, params)
        rhs = f.eval_numeric(t, params) * g.eval_numeric(t, params)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_btilde_a_integral_identity():
    # int_0^{2pi} Btilde * A dt = pi (a d - b c) for degree-1 trig coefficients
    a, b, c, d = (ParamPoly.variable(n) for n in "abcd")
    B = TimeExpr.cos_t() * a + TimeExpr.sin_t() * b
    A = TimeExpr.cos_t() * c + TimeExpr.sin_t() * d
    val = (B.integrate0() * A).integrate0().eval_at_omega(PeriodSpec.two_pi())
    assert val == parse_poly("pi*a*d-pi*b*c")


def test_coefficient_grammar():
    pc = parse_coefficient("poly t: 1 + 2t + 3t^2")
    assert pc == TimeExpr.constant(1) + TimeExpr.t_power(1) * 2 + TimeExpr.t_power(2) * 3
    tc = parse_coefficient("trig: a*cos(t) + b*sin(t) + e*cos(t)*sin(t)^2")
    assert tc.is_real_valued
    assert parse_coefficient("i").constant_poly().constant_value() == GaussianRational(0, 1)
    with pytest.raises(Exception):
        parse_coefficient("poly t: cos(t)")


def test_real_imag_split():
    i = GaussianRational(0, 1)
    f = TimeExpr.cos_t() + TimeExpr.sin_t() * i
    u, v = f.real_imag_parts()
    assert u == TimeExpr.cos_t()
    assert v == TimeExpr.sin_t()
    assert (u + v * i) == f
