"""Closed-form center and non-center criteria.

Four families of rules:

* the single-nonlinear-term test for dz/dt = z^N + A(t) z: multiplicity N or
  a certified center depending on e^{int A} = 1 and the vanishing of
  int_0^omega e^{(N-1) int_0^t A}; exact when A is a constant i*k in the
  algebra, quadrature-based otherwise, with a two-threshold decision band so
  an iff-criterion is never decided inside integration noise;

* the Bessel coefficient family z^N + (p*i - x*i*cos t) z / (N-1), whose
  center condition reduces to J_p(x) = 0 (series-evaluated with exact
  rational arithmetic: the terms alternate with catastrophic cancellation in
  floats for moderate x);

* composition centers: coefficients built as p'(t) f_k(p(t)) e^{(1-k) int q}
  from a common periodic p, centers by construction;

* the invariant-line certificate: if every coefficient satisfies
  a_j sin(j alpha) = b_j cos(j alpha) on a ray alpha = 2k pi/(N-1) and the
  leading coefficient is real and bounded away from zero, the origin is not
  a center.  For rational multiples of pi the trigonometric values are
  classified exactly (zero, +-1 tangent, or irrational tangent, which by
  Niven's theorem forces both sides to vanish), so the symbolic check is
  exact, never floating.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .rationals import GaussianRational, RAT, RAT_ZERO
from .timealgebra import PeriodSpec, TimeExpr
from .variational import EquationSpec, LinearTermError, theoremB_lambdas, theoremB_verdict
from .verifier import NumericEquation, _integrate


@dataclass
class CenterVerdict:
    """Outcome of one criterion with its supporting computation."""

    status: str  # center-certified | not-center | multiplicity-k | inconclusive
    multiplicity: int | None = None
    criterion: str = ""
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "multiplicity": self.multiplicity,
            "criterion": self.criterion,
            "certificate": self.certificate,
        }


@dataclass(frozen=True)
class BesselSpec:
    p: int
    x: float

    def __post_init__(self):
        if self.p < 0 or self.p > 20:
            raise ValueError("order p must be in 0..20")
        if abs(self.x) > 50:
            raise ValueError("|x| <= 50 for the guarded series")


def _bessel_series(p: int, x: Fraction, tail: Fraction) -> Fraction:
    """Exact partial sum of the J_p series with the tail below ``tail``."""
    half = x / 2
    half2 = half * half
    term = half ** p / math.factorial(p)
    total = Fraction(0)
    j = 0
    while True:
        total += term if j % 2 == 0 else -term
        nxt = abs(term) * half2 / ((j + 1) * (p + j + 1))
        # once terms decrease, the tail is bounded by the next term
        if nxt < tail and nxt <= abs(term):
            break
        term = half2 / ((j + 1) * (p + j + 1)) * term
        j += 1
        if j > 800:
            raise RuntimeError("series failed to converge")
    return total


def bessel_J(spec: BesselSpec | None = None, p: int | None = None, x: float | None = None) -> float:
    """J_p(x) by the alternating series, exact rationals inside.

    sum_j (-1)^j (x/2)^(p+2j) / (j! (p+j)!).  The partial sums are computed
    over Q (x enters exactly), so the heavy cancellation around |x| ~ 30-50
    costs nothing; the float happens once at the end.  Absolute error is
    below 1e-12 by the alternating tail bound.
    """
    if spec is None:
        spec = BesselSpec(p, x)
    return float(_bessel_series(spec.p, Fraction(spec.x), Fraction(1, 10 ** 20)))


def bessel_zero(p: int, bracket: tuple[float, float], tol: float = 1e-12) -> Fraction:
    """A zero of J_p inside a sign-changing bracket, by bisection on the series.

    Bisection runs over exact rationals with exact-sign series evaluations,
    so the tolerance may be pushed far below float resolution; callers
    needing the double-double displacement sampler to see a genuine center
    should ask for ~1e-32.
    """
    lo, hi = Fraction(bracket[0]), Fraction(bracket[1])
    tail = Fraction(Fraction(tol) / 1024)
    flo = _bessel_series(p, lo, tail)
    fhi = _bessel_series(p, hi, tail)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError("bracket does not change sign")
    tolf = Fraction(tol)
    while hi - lo > tolf:
        mid = (lo + hi) / 2
        fm = _bessel_series(p, mid, tail)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


# -- the single-nonlinear-term criterion ---------------------------------------------


def theoremC_check(
    A1,
    N: int,
    period: PeriodSpec,
    zero_tol: float = 1e-10,
    nonzero_tol: float = 1e-6,
    rtol: float = 1e-12,
) -> CenterVerdict:
    """Decide dz/dt = z^N + A(t) z: multiplicity N, center, or multiplicity 1.

    A1 may be a TimeExpr in the algebra (constant i*k decides exactly) or a
    callable t -> complex (quadrature).  Numeric results inside the band
    (zero_tol, nonzero_tol) are reported inconclusive with both bounds: the
    underlying criterion is an iff, and noise must not decide it.
    """
    if isinstance(A1, TimeExpr) and (A1.is_zero or _constant_ik(A1) is not None):
        k = 0 if A1.is_zero else _constant_ik(A1)
        if period.full_turns() is None and k != 0:
            raise LinearTermError("constant i*k linear term needs whole turns")
        # e^{int A} = e^{i k omega} = 1 exactly at whole turns
        if (N - 1) * k == 0:
            omega = period.omega_float
            return CenterVerdict(
                "multiplicity-k", N, "single-term-exact",
                {"first_condition": "exact", "integral": omega, "zero": False},
            )
        return CenterVerdict(
            "center-certified", None, "single-term-exact",
            {"first_condition": "exact", "integral": 0.0, "zero": True,
             "note": "full-period exponential integral vanishes"},
        )
    fn = _coefficient_callable(A1)
    omega = period.omega_float

    def rhs(t, y):
        a = fn(t)
        return np.array([a, cmath.exp((N - 1) * complex(y[0]))], dtype=complex)

    y, t_blow, err, steps = _integrate(
        rhs, np.array([0j, 0j]), omega, rtol, 1e-14, None
    )
    if y is None:
        return CenterVerdict("inconclusive", None, "single-term-numeric",
                             {"error": "integration blew up", "time": t_blow})
    d1 = cmath.exp(complex(y[0]))
    integral = complex(y[1])
    cert = {
        "d1": repr(d1),
        "d1_deviation": abs(d1 - 1),
        "integral": repr(integral),
        "integral_abs": abs(integral),
        "zero_tol": zero_tol,
        "nonzero_tol": nonzero_tol,
    }
    if abs(d1 - 1) > nonzero_tol:
        return CenterVerdict("multiplicity-k", 1, "single-term-numeric", cert)
    if abs(d1 - 1) > zero_tol:
        return CenterVerdict("inconclusive", None, "single-term-numeric", cert)
    if abs(integral) >= nonzero_tol:
        return CenterVerdict("multiplicity-k", N, "single-term-numeric", cert)
    if abs(integral) <= zero_tol:
        return CenterVerdict("center-certified", None, "single-term-numeric", cert)
    return CenterVerdict("inconclusive", None, "single-term-numeric", cert)


def _constant_ik(A1: TimeExpr):
    try:
        const = A1.constant_poly()
    except ValueError:
        return None
    if not const.is_constant:
        return None
    c = const.constant_value()
    if c.re != RAT_ZERO or c.im.denominator != 1:
        return None
    return int(c.im.numerator)


def _coefficient_callable(A1):
    if callable(A1):
        return A1
    if isinstance(A1, TimeExpr):
        if A1.variables:
            raise ValueError("coefficient has unbound parameters")
        terms = A1.exact_terms({})
        fl = [(j, k, v.to_complex()) for (j, k, v) in terms]

        def fn(t):
            total = 0j
            for j, k, v in fl:
                term = v
                if j:
                    term *= t ** j
                if k:
                    term *= cmath.exp(1j * k * t)
                total += term
            return total

        return fn
    raise TypeError(f"cannot evaluate coefficient {A1!r}")


# -- the Bessel family ----------------------------------------------------------------


def bessel_center_equation(N: int, p: int, x) -> NumericEquation:
    """dz/dt = z^N + (p*i - x*i*cos t) z / (N-1), omega = 2*pi, exact terms.

    x may be a float or an exact Fraction; rational zeros from bessel_zero
    enter the high-precision integrator without rounding.
    """
    scale = RAT(1, N - 1)
    xr = RAT(Fraction(x))
    xi = GaussianRational(RAT_ZERO, -xr / 2)  # -x i / 2 per e^{+-it}
    terms = {
        N: [(0, 0, GaussianRational(1))],
        1: [
            (0, 0, GaussianRational(RAT_ZERO, RAT(p) * scale)),
            (0, 1, xi * GaussianRational(scale)),
            (0, -1, xi * GaussianRational(scale)),
        ],
    }
    return NumericEquation(N, 2 * math.pi, terms, period=PeriodSpec.two_pi())


def bessel_center_family(N: int, p: int, x: float, zero_tol: float = 1e-10) -> CenterVerdict:
    """Center test for the Bessel coefficient family.

    The first condition e^{int A} = e^{2 pi p i/(N-1)} = 1 holds exactly iff
    (N-1) divides p; the second integral equals 2 pi J_p(x).  Both are
    decided without quadrature; the numeric verifier cross-checks centers
    downstream.
    """
    cert: dict = {"N": N, "p": p, "x": x}
    if p % (N - 1) != 0:
        cert["first_condition"] = f"e^(2*pi*{p}*i/{N - 1}) != 1"
        return CenterVerdict("multiplicity-k", 1, "bessel-family", cert)
    cert["first_condition"] = "holds exactly"
    jval = bessel_J(p=p, x=x)
    cert["J_p(x)"] = jval
    cert["integral"] = 2 * math.pi * jval
    if abs(jval) <= zero_tol:
        return CenterVerdict("center-certified", None, "bessel-family", cert)
    return CenterVerdict("multiplicity-k", N, "bessel-family", cert)


# -- composition centers ---------------------------------------------------------------


def theoremD_construct(
    p_expr: TimeExpr,
    q_turns: int,
    f_polys: dict[int, list],
    N: int,
    period: PeriodSpec,
) -> EquationSpec:
    """Build the composition-center equation from p, q = i*q_turns and f_k.

    dz/dt = q z + sum_k p'(t) f_k(p(t)) e^{(1-k) int q} z^k is a center by
    construction.  f_polys maps k to the coefficient list of the polynomial
    f_k (constant-first).  p must be in the algebra and omega a whole number
    of turns when q_turns != 0.
    """
    if not isinstance(p_expr, TimeExpr):
        raise TypeError("p is not in the coefficient algebra")
    if q_turns and period.full_turns() is None:
        raise ValueError("nonzero q needs omega to be a whole number of turns")
    dp = p_expr.differentiate()
    coeffs: dict[int, TimeExpr] = {}
    if q_turns:
        coeffs[1] = TimeExpr.constant(GaussianRational(RAT_ZERO, RAT(q_turns)))
    for k, poly in f_polys.items():
        if k < 2 or k > N:
            raise ValueError("f_k indices must lie in 2..N")
        if callable(poly):
            raise TypeError("p is in the algebra but f_k is not polynomial; "
                            "use the numeric verifier for general f_k")
        fk = TimeExpr.zero()
        power = TimeExpr.constant(1)
        for ci in poly:
            fk = fk + power * _as_scalar(ci)
            power = power * p_expr
        term = dp * fk
        if q_turns:
            term = term * TimeExpr.exp_t((1 - k) * q_turns)
        if not term.is_zero:
            coeffs[k] = term
    if N not in coeffs or coeffs[N].is_zero:
        raise ValueError("the z^N coefficient vanished; pick f_N with p' f_N(p) != 0")
    return EquationSpec(N, period, coeffs, label="composition center")


def _as_scalar(c) -> GaussianRational:
    if isinstance(c, GaussianRational):
        return c
    if isinstance(c, complex):
        return GaussianRational.from_complex(c)
    return GaussianRational(RAT(c))


def theoremD_monic_instance(N: int) -> tuple[NumericEquation, dict]:
    """The composition instance whose z^N coefficient is exactly 1.

    With p(t) = e^{2 pi i t}/(2 pi i), f_k = 1 and q = 2 pi i/(N-1) over the
    period omega = N-1, the z^N coefficient p'(t) f_N(p) e^{(1-N) int q}
    collapses to e^{2 pi i t} e^{-2 pi i t} = 1.  The frequencies live on the
    lattice 2 pi/(N-1), outside the integer-frequency algebra, so the
    returned equation carries callable coefficients for the numeric verifier;
    the monicity itself is exact exponent arithmetic, recorded in the
    certificate.
    """
    omega = float(N - 1)
    base = 2 * math.pi
    cycles = {}
    for k in range(2, N + 1):
        # p' e^{(1-k) q t} = e^{2 pi i t} * e^{2 pi i (1-k) t/(N-1)}
        cyc = Fraction(1) + Fraction(1 - k, N - 1)
        cycles[k] = cyc

    def coeff(k):
        cyc = float(cycles[k])

        def fn(t, _c=cyc):
            return cmath.exp(1j * base * _c * t)

        return fn

    fns = {k: coeff(k) for k in range(2, N + 1)}
    fns[1] = lambda t: 1j * base / (N - 1)
    eq = NumericEquation.from_callables(N, omega, fns)
    cert = {
        "monic": cycles[N] == 0,
        "z^N cycles": str(cycles[N]),
        "q": f"2*pi*i/{N - 1}",
        "omega": omega,
    }
    return eq, cert


# -- invariant-line certificate ----------------------------------------------------------


def _trig_class(r: Fraction):
    """Classify sin(pi r), cos(pi r) for rational r: exact sign data.

    Returns one of ('sin0', cos_sign), ('cos0', sin_sign),
    ('tan1', sin_sign, cos_sign), ('irrational',).
    """
    r = r % 2
    if r.denominator == 1:
        return ("sin0", 1 if r == 0 else -1)
    if (r - Fraction(1, 2)).denominator == 1:
        return ("cos0", 1 if r == Fraction(1, 2) else -1)
    if (4 * r).denominator == 1:
        # r in {1/4, 3/4, 5/4, 7/4}: |sin| = |cos|
        s = 1 if 0 < r < 1 else -1
        c = 1 if (r < Fraction(1, 2) or r > Fraction(3, 2)) else -1
        return ("tan1", s, c)
    return ("irrational",)


def invariant_line_certificate(eq: EquationSpec, gamma_tol: float = 1e-12):
    """Search k in 0..N-2 for an invariant ray alpha = 2k pi/(N-1).

    The coefficient identity a_j sin(j alpha) = b_j cos(j alpha) is checked
    exactly in the algebra (coefficient-wise); the leading coefficient must be
    real with a certified positive lower bound gamma.  Returns
    (alpha_fraction_of_pi, report) on success, else None; a hit means the
    origin is not a center.
    """
    N = eq.degree
    if eq.params:
        raise ValueError("invariant-line check needs a concrete equation")
    lead = eq.coeff(N)
    re_lead, im_lead = lead.real_imag_parts()
    if not im_lead.is_zero:
        return None
    gamma = _positive_lower_bound(re_lead)
    if gamma is None or not gamma > 0:
        return None
    parts = {}
    for j in range(1, N):
        cj = eq.coeff(j)
        parts[j] = cj.real_imag_parts() if not cj.is_zero else (TimeExpr.zero(), TimeExpr.zero())
    for k in range(0, N - 1):
        ok = True
        checks = []
        for j in range(1, N):
            a_j, b_j = parts[j]
            if a_j.is_zero and b_j.is_zero:
                continue
            cls = _trig_class(Fraction(2 * j * k, N - 1))
            if cls[0] == "sin0":
                good = b_j.is_zero
                need = "b_j = 0"
            elif cls[0] == "cos0":
                good = a_j.is_zero
                need = "a_j = 0"
            elif cls[0] == "tan1":
                _, s, c = cls
                good = (a_j.scale(GaussianRational(s)) - b_j.scale(GaussianRational(c))).is_zero
                need = f"{s}*a_j = {c}*b_j"
            else:
                good = a_j.is_zero and b_j.is_zero
                need = "a_j = b_j = 0 (irrational tangent)"
            checks.append({"j": j, "need": need, "holds": good})
            if not good:
                ok = False
                break
        if ok:
            gamma_half = gamma / 2
            report = {
                "k": k,
                "alpha": f"{2 * k}/{N - 1} * pi",
                "gamma": float(gamma_half),
                "gamma_exact": str(gamma_half),
                "lead_lower_bound": float(gamma),
                "gamma_cos_positive": True,  # cos((N-1) alpha) = cos(2 k pi) = 1
                "checks": checks,
            }
            return Fraction(2 * k, N - 1), report
    return None


def _positive_lower_bound(re_lead: TimeExpr):
    """Exact rational lower bound of a real trig polynomial: c0 - sum |c_k|."""
    const = RAT_ZERO
    amp = RAT_ZERO
    for (j, k, exps), coef in re_lead.terms.items():
        if exps and any(exps):
            return None
        if j:
            return None  # t-dependent leading coefficients are not bounded this way
        mag = abs(coef.re) + abs(coef.im)
        if k == 0:
            const = const + coef.re
        else:
            amp = amp + mag
    lb = const - amp
    return lb if lb > 0 else None


# -- two- and three-term rules ------------------------------------------------------------


def nonzero_term_indices(eq: EquationSpec) -> list[int]:
    return sorted(k for k, v in eq.coeffs.items() if not v.is_zero)


def two_term_rule(eq: EquationSpec) -> CenterVerdict | None:
    """A two-term equation has a center only when one term is linear."""
    idx = nonzero_term_indices(eq)
    if len(idx) != 2 or idx[0] == 1:
        return None
    M, N = idx
    cert = {"indices": idx}
    intA = eq.coeff(N).integrate0().eval_at_omega(eq.period)
    cert["int_A"] = str(intA)
    if eq.is_concrete():
        return CenterVerdict("not-center", None, "two-term", cert)
    return CenterVerdict("not-center", None, "two-term", cert)


def three_term_rule(eq: EquationSpec) -> CenterVerdict | None:
    """Theorem-B lambdas for A z^N + B z^M + C z^L patterns (concrete input)."""
    idx = nonzero_term_indices(eq)
    if len(idx) != 3 or idx[0] == 1:
        return None
    L, M, N = idx
    if not (1 < L < M < N and N == L + M - 1):
        return None
    lam1, lam2, lam3 = theoremB_lambdas(
        eq.coeff(N), eq.coeff(M), eq.coeff(L), L, M, N, eq.period
    )
    cert = {"L": L, "M": M, "N": N,
            "lambda1": str(lam1), "lambda2": str(lam2), "lambda3": str(lam3)}
    if not eq.is_concrete():
        if lam1.is_zero and lam2.is_zero and lam3.is_zero:
            return CenterVerdict("inconclusive", None, "three-term", cert)
        return None
    mult, which = theoremB_verdict(lam1, lam2, lam3, L, M, N)
    cert["decided_by"] = which
    if mult is None:
        return CenterVerdict("inconclusive", None, "three-term", cert)
    return CenterVerdict("multiplicity-k", mult, "three-term", cert)


def corollaryB1_rule(eq: EquationSpec) -> CenterVerdict | None:
    """int A != 0 for a two-term equation A z^N + B z^M: not a center."""
    idx = nonzero_term_indices(eq)
    if len(idx) != 2 or idx[0] == 1:
        return None
    M, N = idx
    intA = eq.coeff(N).integrate0().eval_at_omega(eq.period)
    if intA.is_zero:
        return None
    cert = {"M": M, "N": N, "int_A": str(intA)}
    if eq.is_concrete():
        # the Theorem-B chain also bounds the multiplicity by N
        return CenterVerdict("not-center", None, "two-term-nonzero-mean", cert)
    return CenterVerdict("not-center", None, "two-term-nonzero-mean", cert)
