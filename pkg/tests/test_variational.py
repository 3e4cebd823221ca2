"""The displacement-map coefficient recursion and the three-term machinery."""

from fractions import Fraction

import pytest

from polycenters.parampoly import ParamPoly
from polycenters.rationals import GaussianRational, RAT
from polycenters.timealgebra import PeriodSpec, TimeExpr
from polycenters.variational import (
    EquationSpec,
    LinearTermError,
    VariationalEngine,
    corollaryB_transform,
    theoremB_lambdas,
    theoremB_verdict,
    variational_coeffs,
)
from polycenters.verifier import NumericEquation, displacement_profile


def quartic(period, coeffs):
    return EquationSpec(4, period, {4: TimeExpr.constant(1), **coeffs})


def test_bare_power_equation():
    # dz/dt = z^4 over [0, 1]: d_2 = d_3 = 0, d_4 = t, d_7 = 2t^2, d_10 = 14/3 t^3
    eq = EquationSpec(4, PeriodSpec.rational(1), {4: TimeExpr.constant(1)})
    ds = variational_coeffs(eq, 10)
    assert ds[1].is_zero and ds[2].is_zero
    assert ds[3] == TimeExpr.t_power(1)
    assert ds[6] == TimeExpr.t_power(2) * 2
    assert ds[9] == TimeExpr.t_power(3) * GaussianRational(RAT(14, 3))


def test_lowest_order_coefficient_is_integral_of_lowest_term():
    # d_L(t) = int_0^t C for dz/dt = A z^N + B z^M + C z^L
    a, b = ParamPoly.variable("a"), ParamPoly.variable("b")
    C = TimeExpr.cos_t() * a
    B = TimeExpr.sin_t() * b
    eq = EquationSpec(
        6, PeriodSpec.two_pi(), {6: TimeExpr.constant(1), 4: B, 2: C}
    )
    engine = VariationalEngine(eq)
    assert engine.d(2) == C.integrate0()


def test_single_term_with_linear_part():
    # dz/dt = z^N + i z with whole turns: d_k = 0 for 2 <= k <= N-1
    N = 5
    eq = EquationSpec(
        N, PeriodSpec.two_pi(),
        {N: TimeExpr.constant(1), 1: TimeExpr.constant(GaussianRational(0, 1))},
    )
    engine = VariationalEngine(eq)
    for k in range(2, N):
        assert engine.d(k).is_zero
    assert engine.d(N).eval_at_omega(PeriodSpec.two_pi()).is_zero  # (N-1)*1 != 0


def test_unsupported_linear_term_raises():
    eq = EquationSpec(
        4, PeriodSpec.two_pi(),
        {4: TimeExpr.constant(1), 1: TimeExpr.cos_t()},
    )
    with pytest.raises(LinearTermError, match="numeric verifier"):
        VariationalEngine(eq)
    eq2 = EquationSpec(
        4, PeriodSpec.rational(1),
        {4: TimeExpr.constant(1), 1: TimeExpr.constant(GaussianRational(0, 1))},
    )
    with pytest.raises(LinearTermError):
        VariationalEngine(eq2)


def test_numeric_oracle_for_d5():
    # independent check of the recursion: RK4 on the variational ODE system
    vals = {"a": Fraction(3, 2), "b": Fraction(-1, 3), "c": Fraction(2, 5), "d": Fraction(1, 2)}
    C2 = -vals["a"] / 2
    C1 = -(vals["b"] / 2 + vals["c"] / 3 + vals["d"] / 4)
    t = TimeExpr.t_power
    A = (TimeExpr.constant(GaussianRational(RAT(C2))) + t(1) * GaussianRational(RAT(vals["a"])))
    B = (TimeExpr.constant(GaussianRational(RAT(C1))) + t(1) * GaussianRational(RAT(vals["b"]))
         + t(2) * GaussianRational(RAT(vals["c"])) + t(3) * GaussianRational(RAT(vals["d"])))
    eq = quartic(PeriodSpec.rational(1), {3: A, 2: B})
    engine = VariationalEngine(eq)
    d5 = float(engine.d(5).eval_at_omega(eq.period).constant_value().re)

    Af = lambda s: float(C2) + float(vals["a"]) * s  # noqa: E731
    Bf = lambda s: (float(C1) + float(vals["b"]) * s + float(vals["c"]) * s ** 2  # noqa: E731
                    + float(vals["d"]) * s ** 3)

    def rhs(s, y):
        d2, d3, d4, d5v = y
        A_, B_ = Af(s), Bf(s)
        return [
            B_,
            A_ + 2 * B_ * d2,
            1 + 3 * A_ * d2 + B_ * (2 * d3 + d2 ** 2),
            4 * d2 + A_ * (3 * d3 + 3 * d2 ** 2) + B_ * (2 * d4 + 2 * d2 * d3),
        ]

    n, h = 4000, 1.0 / 4000
    y, s = [0.0] * 4, 0.0
    for _ in range(n):
        k1 = rhs(s, y)
        k2 = rhs(s + h / 2, [y[j] + h / 2 * k1[j] for j in range(4)])
        k3 = rhs(s + h / 2, [y[j] + h / 2 * k2[j] for j in range(4)])
        k4 = rhs(s + h, [y[j] + h * k3[j] for j in range(4)])
        y = [y[j] + h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]) for j in range(4)]
        s += h
    assert abs(d5 - y[3]) < 1e-9


def test_theoremB_lambdas_and_eta4_crosslink():
    # with (L, M, N) = (2, 3, 4) and unit leading term, lambda_3 = omega + int(A Btilde)
    a, b, c, d = (ParamPoly.variable(n) for n in "abcd")
    A = TimeExpr.cos_t() * c + TimeExpr.sin_t() * d
    B = TimeExpr.cos_t() * a + TimeExpr.sin_t() * b
    w = PeriodSpec.two_pi()
    lam1, lam2, lam3 = theoremB_lambdas(TimeExpr.constant(1), A, B, 2, 3, 4, w)
    assert lam1.is_zero and lam2.is_zero
    target = TimeExpr.constant(1).integrate0().eval_at_omega(w) + (
        B.integrate0() * A
    ).integrate0().eval_at_omega(w)
    assert lam3 == target
    # equals d_4(omega) for the corresponding quartic equation
    eq = quartic(w, {3: A, 2: B})
    d4 = VariationalEngine(eq).d(4).eval_at_omega(w)
    assert d4 == lam3


def test_theoremB_zero_mean_lambda1():
    lam1, _, _ = theoremB_lambdas(
        TimeExpr.constant(1), TimeExpr.zero(), TimeExpr.sin_t(), 2, 3, 4,
        PeriodSpec.two_pi(),
    )
    assert lam1.is_zero


def test_theoremB_index_constraint():
    with pytest.raises(ValueError, match="inapplicable"):
        theoremB_lambdas(TimeExpr.constant(1), TimeExpr.zero(), TimeExpr.zero(),
                         2, 3, 5, PeriodSpec.two_pi())


def test_theoremB_verdict_mapping():
    one = ParamPoly.constant(1)
    zero = ParamPoly.zero()
    assert theoremB_verdict(one, zero, zero, 2, 3, 4) == (2, "lambda1")
    assert theoremB_verdict(zero, one, zero, 2, 3, 4) == (3, "lambda2")
    assert theoremB_verdict(zero, zero, one, 2, 3, 4) == (4, "lambda3")
    assert theoremB_verdict(zero, zero, zero, 2, 3, 4)[0] is None


def test_corollaryB_identity_when_D_zero():
    A, B, C = TimeExpr.cos_t(), TimeExpr.sin_t(), TimeExpr.cos_t(2)
    out = corollaryB_transform(A, B, C, TimeExpr.zero(), 2, 3, 4, PeriodSpec.two_pi())
    assert out == (A, B, C)


def test_corollaryB_constant_shift():
    A = TimeExpr.cos_t()
    D = TimeExpr.constant(GaussianRational(0, 1))
    A1, B1, C1 = corollaryB_transform(
        A, TimeExpr.zero(), TimeExpr.sin_t(), D, 2, 3, 4, PeriodSpec.two_pi()
    )
    assert A1 == TimeExpr.exp_t(3) * A
    assert C1 == TimeExpr.exp_t(1) * TimeExpr.sin_t()


def test_corollaryB_preserves_multiplicity_numerically():
    # the derived transform must leave the displacement Taylor data unchanged
    A = TimeExpr.cos_t() * GaussianRational(RAT(1, 2)) + TimeExpr.constant(1)
    B = TimeExpr.sin_t()
    C = TimeExpr.cos_t() + TimeExpr.sin_t() * GaussianRational(RAT(1, 3))
    D = TimeExpr.constant(GaussianRational(0, 1))
    w = PeriodSpec.two_pi()
    eq_full = EquationSpec(4, w, {4: A, 3: B, 2: C, 1: D})
    A1, B1, C1 = corollaryB_transform(A, B, C, D, 2, 3, 4, w)
    eq_flat = EquationSpec(4, w, {4: A1, 3: B1, 2: C1})
    p_full = displacement_profile(NumericEquation.from_equation(eq_full), 1e-2, 32, 6, check_radius=False)
    p_flat = displacement_profile(NumericEquation.from_equation(eq_flat), 1e-2, 32, 6, check_radius=False)
    for n in range(2, 7):
        assert abs(p_full.d_hat[n - 1] - p_flat.d_hat[n - 1]) < 1e-20
    # the center requirement maps to the lambda test on the transformed system
    lam1 = C1.integrate0().eval_at_omega(w)
    d2 = VariationalEngine(eq_full).d(2).eval_at_omega(w)
    assert lam1 == d2
