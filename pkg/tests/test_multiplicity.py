"""The obstruction loop: substitutions, unit detection, real verdicts."""

import random

from polycenters.classes import (
    bare_quartic_class,
    parity_split_trig_class,
    trig_degree1_class,
)
from polycenters.multiplicity import eta_sequence, mu_max_loop
from polycenters.parampoly import grevlex, parse_poly
from polycenters.reproduce import run_class_analysis
from polycenters.timealgebra import PeriodSpec, TimeExpr
from polycenters.variational import EquationSpec


def test_bare_quartic_stops_at_four():
    cdef = bare_quartic_class()
    rep = run_class_analysis(cdef)
    assert rep.mu_max_complex == 4
    e4 = rep.sequence.entry(4)
    # eta_4 is the period: a positive unit, normalized to 1
    assert e4.eta == parse_poly("1")
    assert e4.d_omega == parse_poly("2*pi")
    assert rep.mu_max_real == 4


def test_parity_split_class_stops_at_four(class_analyses):
    cdef = parity_split_trig_class()
    rep = run_class_analysis(cdef)
    assert rep.mu_max_complex == 4
    assert rep.mu_max_real == 4
    # eta_2 = 0 (odd z^2 coefficient), eta_3 eliminates one even parameter
    kinds = {e.n: e.kind for e in rep.sequence.entries}
    assert kinds[2] == "zero"
    assert kinds[3] == "substitution"


def test_trig_degree1_sequence(class_analyses):
    _cdef, rep = class_analyses["4a"]
    seq = rep.sequence
    assert [e.kind for e in seq.entries[:3]] == ["zero", "zero", "generator"]
    assert seq.entry(4).eta == parse_poly("b*c-a*d-2")
    assert seq.entry(4).unit_pi_power == 1
    assert rep.mu_max_complex == 7
    assert rep.mu_max_real == 6
    assert rep.real_attainment.real_status == "witness-found"


def test_eta_sequence_multiplicity_claim_soundness(class_analyses):
    # no complex point may null every obstruction once the ideal is the unit
    rng = random.Random(17)
    _cdef, rep = class_analyses["4a"]
    etas = [e.eta for e in rep.sequence.entries if e.kind == "generator"]
    for _ in range(1000):
        point = {
            v: complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            for v in "abcd"
        }
        values = [abs(g.eval_complex(point)) for g in etas]
        assert max(values) > 1e-9


def test_substitution_reported_not_silent():
    cdef = parity_split_trig_class()
    seq = eta_sequence(cdef.eq, 4, order=cdef.order, eliminate=cdef.eliminate)
    assert seq.substitutions, "setup relations must be recorded"
    n, name, sol = seq.substitutions[0]
    assert name in cdef.eliminate


def test_vmax_basis_is_previous_level(class_analyses):
    _cdef, rep = class_analyses["4a"]
    assert rep.vmax_basis is not None
    assert set(rep.vmax_basis.generator_strings()) == {"a^2+b^2", "b*c-a*d-2"}


def test_cap_reached_report():
    cdef = trig_degree1_class()
    rep = mu_max_loop(cdef.eq, nmax_cap=5, order=cdef.order)
    assert rep.cap_reached
    assert rep.mu_max_complex is None


def test_concrete_equation_multiplicity():
    # a parameter-free equation: first nonzero obstruction is the multiplicity
    eq = EquationSpec(
        4, PeriodSpec.two_pi(),
        {4: TimeExpr.constant(1), 2: TimeExpr.cos_t() + TimeExpr.constant(1)},
    )
    rep = mu_max_loop(eq, nmax_cap=6, order=grevlex())
    assert rep.mu_max_complex == 2  # int B = 2 pi != 0
