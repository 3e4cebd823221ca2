"""The numeric oracle: flows against closed forms, blow-up, Taylor extraction."""

import math

import pytest

from polycenters.criteria import invariant_line_certificate
from polycenters.rationals import GaussianRational, RAT
from polycenters.timealgebra import PeriodSpec, TimeExpr
from polycenters.variational import EquationSpec, VariationalEngine
from polycenters.parampoly import ParamPoly
from polycenters.verifier import (
    NumericEquation,
    ProfileError,
    displacement_profile,
    estimate_multiplicity,
    flow,
    theorem_a_escape_radius,
    verify_center,
)


def bare_quartic():
    eq = EquationSpec(4, PeriodSpec.rational(1), {4: TimeExpr.constant(1)})
    return NumericEquation.from_equation(eq)


def closed_form(c, t):
    # dz/dt = z^4 separates: z(t) = c (1 - 3 c^3 t)^(-1/3)
    return c / (1 - 3 * c ** 3 * t) ** (1 / 3)


def test_flow_against_closed_form():
    neq = bare_quartic()
    for c in (0.05, 0.1, 0.1j):
        res = flow(neq, c)
        assert not res.blew_up
        assert abs(res.endpoint - closed_form(c, 1.0)) <= 1e-10


def test_flow_zero_stays_zero():
    res = flow(bare_quartic(), 0.0)
    assert res.endpoint == 0


def test_flow_blowup_time():
    res = flow(bare_quartic(), 1.0)
    assert res.blew_up
    assert abs(res.blowup_time - 1 / 3) < 1e-3


def test_profile_of_bare_quartic():
    prof = displacement_profile(bare_quartic(), 1e-2, 64, 12)
    assert prof.converged
    assert abs(prof.d_hat[1]) <= 1e-10 and abs(prof.d_hat[2]) <= 1e-10
    assert abs(prof.d_hat[3] - 1.0) <= 1e-8
    assert abs(prof.d_hat[6] - 2.0) <= 1e-8
    assert abs(prof.d_hat[9] - 14 / 3) <= 1e-8
    assert estimate_multiplicity(prof) == 4


def test_profile_linear_equation():
    neq = NumericEquation(1, 2 * math.pi, {1: [(0, 0, 1j)]}, period=PeriodSpec.two_pi())
    prof = displacement_profile(neq, 1e-2, 64, 8)
    assert abs(prof.d_hat[0] - 1.0) <= 1e-10
    assert estimate_multiplicity(prof) == "center-consistent up to 8"


def test_profile_matches_symbolic_first_obstruction():
    # random-ish degree-1 trig coefficients: first estimate at n = 4 equals
    # pi (2 + ad - bc) from the exact pipeline
    a, b, c, d = (ParamPoly.variable(n) for n in "abcd")
    eqs = EquationSpec(
        4, PeriodSpec.two_pi(),
        {4: TimeExpr.constant(1),
         3: TimeExpr.cos_t() * c + TimeExpr.sin_t() * d,
         2: TimeExpr.cos_t() * a + TimeExpr.sin_t() * b},
    )
    vals = {"a": GaussianRational(RAT(1, 2)), "b": GaussianRational(RAT(-2, 3)),
            "c": GaussianRational(RAT(3, 4)), "d": GaussianRational(RAT(1, 5))}
    d4 = VariationalEngine(eqs).d(4).eval_at_omega(eqs.period)
    exact = d4.eval_complex({**{k: v.to_complex() for k, v in vals.items()}, "pi": math.pi})
    neq = NumericEquation.from_equation(eqs, vals)
    prof = displacement_profile(neq, 1e-2, 64, 6)
    assert abs(prof.d_hat[1]) <= 10 * prof.noise_floor[1]
    assert abs(prof.d_hat[2]) <= 10 * prof.noise_floor[2]
    assert abs(prof.d_hat[3] - exact) <= 1e-7 * abs(exact)
    assert estimate_multiplicity(prof) == 4


def test_profile_requires_enough_samples():
    with pytest.raises(ValueError, match="samples"):
        displacement_profile(bare_quartic(), 1e-2, 10, 10)


def test_profile_blowup_reports_reduce_rho():
    with pytest.raises(ProfileError, match="reduce rho"):
        displacement_profile(bare_quartic(), 0.95, 16, 4, check_radius=False)


def test_radius_robustness():
    prof = displacement_profile(bare_quartic(), 1e-2, 64, 10, check_radius=True)
    assert prof.converged
    for n in range(1, 11):
        signal = abs(prof.d_hat[n - 1] - (1.0 if n == 1 else 0.0))
        if signal > 10 * prof.noise_floor[n - 1]:
            assert prof.radius_check[n - 1] <= max(
                1e-6 * signal, 20 * prof.noise_floor[n - 1]
            )


def test_verify_center_negative_case():
    ok, rep = verify_center(bare_quartic(), 1e-2, 20)
    assert not ok
    # deviation ~ d_4 rho^4 = 1e-8
    assert abs(rep["max_deviation"] - 1e-8) < 1e-9


def test_verify_center_positive_case():
    # z' = z^4 + i z over 2 pi: Theorem C conditions hold exactly
    eq = EquationSpec(
        4, PeriodSpec.two_pi(),
        {4: TimeExpr.constant(1), 1: TimeExpr.constant(GaussianRational(0, 1))},
    )
    ok, rep = verify_center(NumericEquation.from_equation(eq), 1e-2, 20)
    assert ok and rep["max_deviation"] <= 1e-6 * 1e-2


def test_verify_center_blowup_diagnostics():
    ok, rep = verify_center(bare_quartic(), 0.95, 8)
    assert not ok and rep["blowup"]


def test_blowup_beyond_invariant_line_radius():
    # where the invariant-line certificate fires, real starts beyond the
    # escape-radius bound cannot return: the flow must report blow-up
    eq = EquationSpec(4, PeriodSpec.rational(1),
                      {4: TimeExpr.constant(1), 2: TimeExpr.constant(GaussianRational(RAT(1, 4)))})
    hit = invariant_line_certificate(eq)
    assert hit is not None
    alpha, cert = hit
    gamma = cert["gamma"]
    a = theorem_a_escape_radius(4, gamma, 1.0, float(alpha) * math.pi)
    res = flow(NumericEquation.from_equation(eq), a * 1.05)
    assert res.blew_up and 0 <= res.blowup_time <= 1.0
