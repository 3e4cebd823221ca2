"""Multiplicity and center analysis for dz/dt = A_N(t) z^N + ... + A_1(t) z.

Exact symbolic pipeline (variational obstructions, Groebner solvability,
closed-form criteria) plus an independent high-precision numeric verifier
for the displacement map, with a CLI for class analyses and the
reproduction suite.
"""

__version__ = "0.1.0"

from .rationals import GaussianRational, RAT, RAT_BACKEND
from .parampoly import (
    MonomialOrder,
    ParamPoly,
    grevlex,
    leading_term,
    lex,
    parse_poly,
    poly_add,
    poly_mul,
)
from .timealgebra import (
    PeriodSpec,
    TimeExpr,
    eval_at_omega,
    eval_numeric,
    integrate0,
    parse_coefficient,
    texpr_mul,
)
from .variational import (
    EquationSpec,
    LinearTermError,
    ParamSpec,
    corollaryB_transform,
    theoremB_lambdas,
    theoremB_verdict,
    variational_coeffs,
)
from .groebner import (
    Budget,
    BudgetExceeded,
    IdealBasis,
    buchberger,
    ideal_equal,
    normal_form,
)
from .realsolve import (
    RootIsolation,
    SolvabilityVerdict,
    find_real_witness,
    real_infeasible_by_pattern,
    univariate_real_roots,
)
from .multiplicity import (
    EtaEntry,
    EtaProcess,
    EtaSequence,
    MultiplicityReport,
    eta_sequence,
    mu_max_loop,
)
from .criteria import (
    BesselSpec,
    CenterVerdict,
    bessel_J,
    bessel_center_equation,
    bessel_center_family,
    bessel_zero,
    invariant_line_certificate,
    theoremC_check,
    theoremD_construct,
    theoremD_monic_instance,
)
from .verifier import (
    DisplacementProfile,
    FlowResult,
    NumericEquation,
    ProfileError,
    displacement_profile,
    estimate_multiplicity,
    flow,
    verify_center,
)
from . import classes, reproduce
