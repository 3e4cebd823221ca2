"""Built-in coefficient classes for dz/dt = z^4 + A(t) z^3 + B(t) z^2.

Each builder fixes the parameter letters, the grevlex variable order and the
constants eliminated by the setup relations, matching the layouts the
reproduction suite checks against.  Two conventions worth spelling out:

* the integration constant C1 always belongs to the z^2 coefficient and C2
  to the z^3 coefficient;
* in the linear/cubic polynomial class the cubic sits on z^2 (letters b, c,
  d) and the linear coefficient on z^3 (letter a) - that is the assignment
  whose ideals are actually attained by the reference artifacts, even though
  prose summaries sometimes swap the two degree labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .parampoly import MonomialOrder, ParamPoly, grevlex
from .timealgebra import PeriodSpec
from .variational import EquationSpec, ParamSpec


@dataclass
class ClassDef:
    """A coefficient class plus the analysis configuration it expects."""

    eq: EquationSpec
    order: MonomialOrder
    eliminate: tuple[str, ...] = ()
    expected_mu_complex: int | None = None
    expected_mu_real: int | None = None
    cap: int = 12
    witness_hints: list[ParamPoly] = field(default_factory=list)

    @property
    def label(self) -> str:
        return self.eq.label

    def to_json(self) -> dict:
        return {
            "label": self.eq.label,
            "degree": self.eq.degree,
            "omega": self.eq.period.to_json(),
            "coeffs": {str(k): self.eq.sources.get(k, "") for k in sorted(self.eq.coeffs)},
            "params": [{"name": p.name, "domain": p.domain} for p in self.eq.params],
            "var_order": list(self.order.variable_order),
            "eliminate": list(self.eliminate),
        }


def _poly(text_by_k: dict[int, str], omega: PeriodSpec, params: list[str], label: str) -> EquationSpec:
    from .timealgebra import parse_coefficient

    coeffs = {k: parse_coefficient(src) for k, src in text_by_k.items()}
    return EquationSpec(
        degree=4,
        period=omega,
        coeffs=coeffs,
        params=tuple(ParamSpec(n) for n in params),
        label=label,
        sources=dict(text_by_k),
    )


def cubic_quadratic_poly_class() -> ClassDef:
    """z^3 coefficient cubic in t, z^2 coefficient quadratic; omega = 1."""
    eq = _poly(
        {
            4: "1",
            3: "poly t: C2 + c*t + d*t^2 + e*t^3",
            2: "poly t: C1 + a*t + b*t^2",
        },
        PeriodSpec.rational(1),
        ["C1", "C2", "a", "b", "c", "d", "e"],
        "polynomial coefficients, deg(z^3) = 3, deg(z^2) = 2",
    )
    return ClassDef(
        eq=eq,
        order=grevlex("b", "c", "d", "a", "e"),
        eliminate=("C1", "C2"),
        expected_mu_complex=10,
        expected_mu_real=10,
    )


def quintic_linear_poly_class() -> ClassDef:
    """z^3 coefficient quintic in t, z^2 coefficient linear; omega = 1."""
    eq = _poly(
        {
            4: "1",
            3: "poly t: C2 + b*t + c*t^2 + d*t^3 + e*t^4 + f*t^5",
            2: "poly t: C1 + a*t",
        },
        PeriodSpec.rational(1),
        ["C1", "C2", "a", "b", "c", "d", "e", "f"],
        "polynomial coefficients, deg(z^3) = 5, deg(z^2) = 1",
    )
    return ClassDef(
        eq=eq,
        order=grevlex("b", "c", "d", "a", "e", "f"),
        eliminate=("C1", "C2"),
        expected_mu_complex=10,
        expected_mu_real=10,
    )


def linear_cubic_poly_class() -> ClassDef:
    """z^3 coefficient linear in t, z^2 coefficient cubic; omega = 1."""
    eq = _poly(
        {
            4: "1",
            3: "poly t: C2 + a*t",
            2: "poly t: C1 + b*t + c*t^2 + d*t^3",
        },
        PeriodSpec.rational(1),
        ["C1", "C2", "a", "b", "c", "d"],
        "polynomial coefficients, deg(z^3) = 1, deg(z^2) = 3",
    )
    return ClassDef(
        eq=eq,
        order=grevlex("b", "c", "d", "a"),
        eliminate=("C1", "C2"),
        expected_mu_complex=8,
        expected_mu_real=8,
    )


def trig_degree1_class() -> ClassDef:
    """Both coefficients homogeneous of degree 1 in cos t, sin t; omega = 2*pi."""
    eq = _poly(
        {
            4: "1",
            3: "trig: c*cos(t) + d*sin(t)",
            2: "trig: a*cos(t) + b*sin(t)",
        },
        PeriodSpec.two_pi(),
        ["a", "b", "c", "d"],
        "trigonometric coefficients, degree 1",
    )
    return ClassDef(
        eq=eq,
        order=grevlex("a", "b", "c", "d"),
        expected_mu_complex=7,
        expected_mu_real=6,
    )


def trig_degree2_class() -> ClassDef:
    """Both coefficients homogeneous of degree 2 in cos t, sin t; omega = 2*pi."""
    eq = _poly(
        {
            4: "1",
            3: "trig: c*cos(t)^2 + d*cos(t)*sin(t) + c1*sin(t)^2",
            2: "trig: a*cos(t)^2 + b*cos(t)*sin(t) + a1*sin(t)^2",
        },
        PeriodSpec.two_pi(),
        ["a", "b", "a1", "c", "d", "c1"],
        "trigonometric coefficients, degree 2",
    )
    return ClassDef(
        eq=eq,
        order=grevlex("a", "b", "c", "d"),
        eliminate=("a1", "c1"),
        expected_mu_complex=7,
        expected_mu_real=6,
    )


def trig_cubic_linear_class() -> ClassDef:
    """z^3 coefficient homogeneous cubic, z^2 coefficient degree 1; omega = 2*pi."""
    eq = _poly(
        {
            4: "1",
            3: "trig: c*cos(t) + d*sin(t) + e*cos(t)*sin(t)^2 + f*sin(t)*cos(t)^2",
            2: "trig: a*cos(t) + b*sin(t)",
        },
        PeriodSpec.two_pi(),
        ["a", "b", "c", "d", "e", "f"],
        "trigonometric coefficients, deg(z^3) = 3, deg(z^2) = 1",
    )
    from .parampoly import parse_poly

    return ClassDef(
        eq=eq,
        order=grevlex("a", "b", "c", "d", "e", "f"),
        expected_mu_complex=10,
        expected_mu_real=8,
        witness_hints=[parse_poly(s) for s in ("a-1", "d-1", "c", "f")],
    )


def parity_split_trig_class() -> ClassDef:
    """z^3 coefficient even-degree trig, z^2 coefficient odd-degree: mu_max = 4."""
    eq = _poly(
        {
            4: "1",
            3: "trig: c*cos(t)^2 + d*cos(t)*sin(t) + c1*sin(t)^2",
            2: "trig: a*cos(t) + b*sin(t)",
        },
        PeriodSpec.two_pi(),
        ["a", "b", "c", "d", "c1"],
        "trigonometric coefficients, even z^3 / odd z^2 degrees",
    )
    return ClassDef(
        eq=eq,
        order=grevlex("a", "b", "c", "d"),
        eliminate=("c1",),
        expected_mu_complex=4,
        expected_mu_real=4,
    )


def bare_quartic_class() -> ClassDef:
    """A = B = 0: the first obstruction is the period itself, mu_max = 4."""
    eq = _poly({4: "1"}, PeriodSpec.two_pi(), [], "bare z^4")
    return ClassDef(eq=eq, order=grevlex(), expected_mu_complex=4, expected_mu_real=4)


SECTION5_CLASSES = {
    "1": cubic_quadratic_poly_class,
    "2": quintic_linear_poly_class,
    "3": linear_cubic_poly_class,
    "4a": trig_degree1_class,
    "4b": trig_degree2_class,
    "5": trig_cubic_linear_class,
}
