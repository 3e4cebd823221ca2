"""Closed-form criteria: single-term tests, Bessel family, composition centers,
invariant lines, two-/three-term rules."""

import cmath
import math
from fractions import Fraction

import pytest

from polycenters.criteria import (
    BesselSpec,
    bessel_J,
    bessel_center_equation,
    bessel_center_family,
    bessel_zero,
    corollaryB1_rule,
    invariant_line_certificate,
    theoremC_check,
    theoremD_construct,
    theoremD_monic_instance,
    three_term_rule,
    two_term_rule,
)
from polycenters.rationals import GaussianRational
from polycenters.timealgebra import PeriodSpec, TimeExpr
from polycenters.variational import EquationSpec, VariationalEngine
from polycenters.verifier import (
    NumericEquation,
    displacement_profile,
    estimate_multiplicity,
    verify_center,
)


# -- Bessel ----------------------------------------------------------------------


def test_bessel_values_at_zero():
    assert bessel_J(p=0, x=0.0) == 1.0
    for p in (1, 2, 7, 20):
        assert bessel_J(p=p, x=0.0) == 0.0


def test_bessel_known_value():
    # large argument: heavy cancellation, still 12 digits
    assert abs(bessel_J(p=0, x=50.0) - 0.05581232766925181) < 1e-12
    assert abs(bessel_J(p=1, x=1.0) - 0.44005058574493355) < 1e-12


def test_bessel_first_zero_bracketed():
    assert bessel_J(p=0, x=2.0) > 0 > bessel_J(p=0, x=3.0)
    x0 = bessel_zero(0, (2.0, 3.0))
    assert abs(float(x0) - 2.404825557695773) < 1e-9
    assert abs(bessel_J(p=0, x=float(x0))) <= 1e-10


def test_bessel_range_guards():
    with pytest.raises(ValueError):
        BesselSpec(0, 51.0)
    with pytest.raises(ValueError):
        BesselSpec(21, 1.0)


# -- single nonlinear term -----------------------------------------------------------


def test_theoremC_exact_center():
    v = theoremC_check(TimeExpr.constant(GaussianRational(0, 1)), 4, PeriodSpec.two_pi())
    assert v.status == "center-certified"


def test_theoremC_zero_coefficient():
    v = theoremC_check(TimeExpr.zero(), 4, PeriodSpec.two_pi())
    assert v.status == "multiplicity-k" and v.multiplicity == 4


def test_theoremC_matches_obstructions():
    # the symbolic pipeline reproduces the same structure: d_k = 0 below N,
    # d_N(omega) equal to the criterion integral
    N, k = 4, 1
    eq = EquationSpec(
        N, PeriodSpec.two_pi(),
        {N: TimeExpr.constant(1), 1: TimeExpr.constant(GaussianRational(0, k))},
    )
    eng = VariationalEngine(eq)
    for m in range(2, N):
        assert eng.d(m).is_zero
    # integral of e^{(N-1) i k t} over a full period vanishes
    assert eng.d(N).eval_at_omega(eq.period).is_zero


def test_theoremC_tan_family_center():
    def a_tan(t):
        return 1j + 2.0 * cmath.tan(t + 1j)

    v = theoremC_check(a_tan, 2, PeriodSpec.two_pi())
    assert v.status == "center-certified"
    eq = NumericEquation(2, 2 * math.pi, {2: [(0, 0, GaussianRational(1))]},
                         callables={1: a_tan})
    ok, rep = verify_center(eq, 1e-2, 20)
    assert ok and rep["max_deviation"] <= 1e-6 * 1e-2


def test_theoremC_inconclusive_band():
    # an integral landing inside (zero_tol, nonzero_tol) must not be decided:
    # perturb a Bessel zero so the criterion integral is ~1e-8
    x_near = float(bessel_zero(0, (2.0, 3.0), tol=1e-14)) + 1e-8

    def a_near(t):
        return -0.5j * x_near * cmath.cos(t)

    v = theoremC_check(a_near, 3, PeriodSpec.two_pi(), zero_tol=1e-12, nonzero_tol=1e-3)
    assert v.status == "inconclusive"
    assert "zero_tol" in v.certificate and "nonzero_tol" in v.certificate


# -- Bessel family ----------------------------------------------------------------------


def test_bessel_family_center_and_flips():
    x0 = bessel_zero(0, (2.0, 3.0), tol=1e-30)
    assert bessel_center_family(3, 0, x0).status == "center-certified"
    v0 = bessel_center_family(3, 0, 0.0)
    assert (v0.status, v0.multiplicity) == ("multiplicity-k", 3)  # J_0(0) = 1
    vp = bessel_center_family(3, 1, 1.0)
    assert (vp.status, vp.multiplicity) == ("multiplicity-k", 1)
    vc = theoremC_check(lambda t: 0.5, 4, PeriodSpec.two_pi())
    assert (vc.status, vc.multiplicity) == ("multiplicity-k", 1)  # e^{pi} != 1


def test_bessel_family_numeric_confirmation():
    x0 = bessel_zero(0, (2.0, 3.0), tol=1e-32)
    eq = bessel_center_equation(3, 0, x0)
    ok, rep = verify_center(eq, 1e-2, 20)
    assert ok and rep["max_deviation"] <= 1e-6 * 1e-2
    prof = displacement_profile(eq, 1e-2, 64, 12)
    assert estimate_multiplicity(prof) == "center-consistent up to 12"


# -- composition centers ------------------------------------------------------------------


def test_theoremD_sin_instance():
    eq = theoremD_construct(TimeExpr.sin_t(), 0, {2: [1], 3: [1], 4: [1]}, 4,
                            PeriodSpec.two_pi())
    for k in (2, 3, 4):
        assert eq.coeff(k) == TimeExpr.cos_t()
    ok, rep = verify_center(eq, 1e-2, 20)
    assert ok and rep["max_deviation"] <= 1e-8


def test_theoremD_zero_f_means_linear_equation():
    with pytest.raises(ValueError, match="z\\^N coefficient vanished"):
        theoremD_construct(TimeExpr.sin_t(), 1, {4: [0]}, 4, PeriodSpec.two_pi())


def test_theoremD_monic_instance():
    eq, cert = theoremD_monic_instance(4)
    assert cert["monic"] is True
    ok, rep = verify_center(eq, 1e-2, 12)
    assert ok


def test_theoremD_nonpolynomial_f_rejected():
    with pytest.raises(TypeError, match="not polynomial"):
        theoremD_construct(TimeExpr.sin_t(), 0, {4: (lambda w: w)}, 4, PeriodSpec.two_pi())


# -- invariant lines ------------------------------------------------------------------------


def test_invariant_line_real_coefficients():
    eq = EquationSpec(4, PeriodSpec.two_pi(),
                      {4: TimeExpr.constant(1), 2: TimeExpr.cos_t() + TimeExpr.sin_t()})
    hit = invariant_line_certificate(eq)
    assert hit is not None
    alpha, report = hit
    assert report["k"] == 0 and alpha == 0
    assert report["gamma"] > 0


def test_invariant_line_quarter_turn():
    i = GaussianRational(0, 1)
    eq = EquationSpec(5, PeriodSpec.two_pi(),
                      {5: TimeExpr.constant(1), 3: TimeExpr.cos_t() * i, 2: TimeExpr.sin_t()})
    hit = invariant_line_certificate(eq)
    assert hit is not None and hit[1]["k"] == 1
    assert hit[0] == Fraction(1, 2)  # alpha = pi/2


def test_invariant_line_fails_for_sign_changing_lead():
    eq = EquationSpec(4, PeriodSpec.two_pi(), {4: TimeExpr.cos_t()})
    assert invariant_line_certificate(eq) is None


def test_invariant_line_fails_for_genuinely_complex_mix():
    i = GaussianRational(0, 1)
    f = TimeExpr.cos_t() + TimeExpr.cos_t(2) * i  # a_1, b_1 both nonzero, tan irrational
    eq = EquationSpec(4, PeriodSpec.two_pi(), {4: TimeExpr.constant(1), 3: f})
    assert invariant_line_certificate(eq) is None


# -- term-count rules -----------------------------------------------------------------------


def test_two_term_rules():
    A = TimeExpr.constant(1)
    B = TimeExpr.cos_t()
    eq = EquationSpec(4, PeriodSpec.two_pi(), {4: A, 2: B})
    v = two_term_rule(eq)
    assert v is not None and v.status == "not-center"
    v2 = corollaryB1_rule(eq)
    assert v2 is not None and v2.status == "not-center"
    # a two-term equation with a linear term is outside the rule
    eq_lin = EquationSpec(4, PeriodSpec.two_pi(),
                          {4: A, 1: TimeExpr.constant(GaussianRational(0, 1))})
    assert two_term_rule(eq_lin) is None


def test_three_term_rule_concrete():
    eq = EquationSpec(
        4, PeriodSpec.two_pi(),
        {4: TimeExpr.constant(1), 3: TimeExpr.sin_t(),
         2: TimeExpr.cos_t() + TimeExpr.constant(1)},
    )
    v = three_term_rule(eq)
    assert v is not None
    assert v.status == "multiplicity-k" and v.multiplicity == 2  # lambda_1 = 2 pi
