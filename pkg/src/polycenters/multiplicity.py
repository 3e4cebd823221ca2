"""The obstruction sequence and the maximum-multiplicity loop.

Level by level this computes d_n(omega), reduces it modulo the ideal of the
earlier obstructions (Groebner normal form under the class's grevlex order),
normalizes the reduced form, and extends the ideal.  The run stops when the
cumulative ideal becomes the unit ideal: at that level k no parameter values
give the origin multiplicity beyond k, and any point of the previous variety
attains exactly k, so k is the maximum multiplicity over the complex numbers.

Linear obstructions with scalar coefficients are eliminated by substitution
into the equation (the class's setup relations), mirroring how the coefficient
classes are normalized before their ideals are formed; the relations are
reported, not silently applied.

Normalization of a reduced obstruction: a single power of pi (and the overall
rational scale, made monic under the class order) is stripped as a positive
unit - a positive unit never affects vanishing.  Mixed powers of pi would be
a genuine obstruction to this normalization and raise instead of being
guessed around.

Real analysis runs alongside: at each level the exact sign-pattern test may
certify that the system has no real solutions, which caps the real maximum
multiplicity; attainment at the previous level is then established by the
witness search.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .groebner import Budget, IdealBasis, buchberger, normal_form
from .parampoly import MonomialOrder, PI_NAME, ParamPoly, split_pi_unit
from .rationals import GaussianRational
from .realsolve import SolvabilityVerdict, find_real_witness, real_infeasible_by_pattern
from .timealgebra import TimeExpr
from .variational import EquationSpec, VariationalEngine


@dataclass
class EtaEntry:
    """One level of the obstruction sequence."""

    n: int
    d_t: TimeExpr
    d_omega: ParamPoly
    reduced: ParamPoly          # normal form of d_omega modulo the earlier ideal
    eta: ParamPoly              # unit-normalized reduced form (zero when in the ideal)
    unit_pi_power: int = 0
    unit_scalar: GaussianRational | None = None
    kind: str = "zero"          # zero | generator | substitution
    substitution: tuple[str, ParamPoly] | None = None

    def eta_with_unit(self) -> ParamPoly:
        """Reconstruct the reduced form from eta and the stripped unit."""
        if self.unit_scalar is None:
            return self.eta
        p = self.eta.scale(self.unit_scalar)
        if self.unit_pi_power:
            p = p * (ParamPoly((PI_NAME,), {(1,): GaussianRational(1)}, _checked=True) ** self.unit_pi_power)
        return p


@dataclass
class EtaSequence:
    """Obstruction entries plus the evolving ideal data for one coefficient class."""

    eq: EquationSpec
    order: MonomialOrder
    entries: list[EtaEntry] = field(default_factory=list)
    substitutions: list[tuple[int, str, ParamPoly]] = field(default_factory=list)
    generators: list[ParamPoly] = field(default_factory=list)
    bases: dict[int, IdealBasis] = field(default_factory=dict)

    def entry(self, n: int) -> EtaEntry:
        for e in self.entries:
            if e.n == n:
                return e
        raise KeyError(n)

    def current_basis(self) -> IdealBasis | None:
        if not self.bases:
            return None
        return self.bases[max(self.bases)]


class EtaProcess:
    """Incremental driver: advance() computes one more level of the sequence."""

    def __init__(
        self,
        eq: EquationSpec,
        order: MonomialOrder | None = None,
        eliminate: tuple[str, ...] = (),
        substitute_linear: bool = True,
        budget: Budget | None = None,
        gb_postcheck: bool = True,
    ):
        self.eq_current = eq
        self.eliminate = tuple(eliminate)
        self.substitute_linear = substitute_linear
        self.budget = budget or Budget()
        self.gb_postcheck = gb_postcheck
        if order is None:
            order = MonomialOrder("grevlex", tuple(eq.param_names))
        self.seq = EtaSequence(eq=eq, order=order)
        self.engine = VariationalEngine(eq)
        self.level = 1
        self._gen_levels: list[int] = []

    def advance(self) -> EtaEntry:
        n = self.level + 1
        self.level = n
        d_t = self.engine.d(n)
        d_omega = d_t.eval_at_omega(self.eq_current.period)
        basis = self.seq.current_basis()
        if basis is None:
            reduced = d_omega
        else:
            # generators are pi-free, so reducing with pi appended as the
            # smallest variable reduces each pi-slice independently
            reduced = normal_form(
                d_omega, list(basis.generators), order=self.order_for(d_omega)
            )
        if reduced.is_zero:
            entry = EtaEntry(n, d_t, d_omega, reduced, reduced, kind="zero")
            self.seq.entries.append(entry)
            return entry
        pi_pow, stripped = split_pi_unit(reduced)
        if (
            self.substitute_linear
            and stripped.total_degree() == 1
            and stripped.variables_used()
        ):
            target = self._pick_target(stripped)
            if target is not None:
                sol = self._solve_linear(stripped, target)
                entry = EtaEntry(
                    n,
                    d_t,
                    d_omega,
                    reduced,
                    stripped,
                    unit_pi_power=pi_pow,
                    unit_scalar=GaussianRational(1),
                    kind="substitution",
                    substitution=(target, sol),
                )
                self.seq.entries.append(entry)
                self.seq.substitutions.append((n, target, sol))
                self._apply_substitution(target, sol)
                return entry
        _, lc = stripped.leading_term(self.order_for(stripped))
        eta = stripped.monic(self.order_for(stripped))
        entry = EtaEntry(
            n,
            d_t,
            d_omega,
            reduced,
            eta,
            unit_pi_power=pi_pow,
            unit_scalar=lc,
            kind="generator",
        )
        self.seq.entries.append(entry)
        self.seq.generators.append(eta)
        self._gen_levels.append(n)
        prev = self.seq.current_basis()
        seed = list(prev.generators) if prev is not None else []
        basis = buchberger(
            seed + [eta], self.seq.order, self.budget, postcheck=self.gb_postcheck
        )
        self.seq.bases[n] = basis
        return entry

    def order_for(self, p: ParamPoly) -> MonomialOrder:
        missing = set(p.variables_used()) - set(self.seq.order.variable_order)
        if missing:
            return MonomialOrder(
                self.seq.order.kind,
                tuple(self.seq.order.variable_order) + tuple(sorted(missing)),
            )
        return self.seq.order

    def run_to(self, kmax: int):
        while self.level < kmax:
            self.advance()
        return self.seq

    # -- internals ---------------------------------------------------------

    def _pick_target(self, linear: ParamPoly) -> str | None:
        present = set(linear.variables_used())
        for name in self.eliminate:
            if name in present:
                return name
        if self.eliminate:
            return None  # only the declared constants may be eliminated
        for p in self.eq_current.params:
            if p.name in present:
                return p.name
        return None

    @staticmethod
    def _solve_linear(linear: ParamPoly, target: str) -> ParamPoly:
        idx = linear.variables.index(target)
        coef = None
        rest_terms = {}
        for exps, c in linear.terms.items():
            if exps[idx]:
                coef = c
            else:
                rest_terms[exps] = c
        rest = ParamPoly(linear.variables, rest_terms, _checked=True)
        return rest.scale(-GaussianRational(1) / coef).substitute(
            target, ParamPoly.constant(0)
        ).compact()

    def _apply_substitution(self, target: str, sol: ParamPoly):
        self.eq_current = self.eq_current.substitute(target, sol)
        self.engine = VariationalEngine(self.eq_current)
        # earlier generators may mention the variable; rewrite them too
        if any(target in g.variables_used() for g in self.seq.generators):
            self.seq.generators = [
                g.substitute(target, sol).compact() for g in self.seq.generators
            ]
            rebuilt = {}
            for n in sorted(self.seq.bases):
                upto = [
                    g
                    for g, lvl in zip(self.seq.generators, self._gen_levels)
                    if lvl <= n
                ]
                rebuilt[n] = buchberger(
                    upto, self.seq.order, self.budget, postcheck=False
                )
            self.seq.bases = rebuilt


def eta_sequence(
    eq: EquationSpec,
    kmax: int,
    order: MonomialOrder | None = None,
    eliminate: tuple[str, ...] = (),
    budget: Budget | None = None,
) -> EtaSequence:
    """Obstruction sequence through level kmax for a symbolic equation."""
    if kmax < 2:
        raise ValueError("kmax must be >= 2")
    proc = EtaProcess(eq, order=order, eliminate=eliminate, budget=budget)
    return proc.run_to(kmax)


@dataclass
class MultiplicityReport:
    """Verdict record for one coefficient class."""

    label: str
    order: MonomialOrder
    sequence: EtaSequence
    mu_max_complex: int | None
    vmax_basis: IdealBasis | None
    mu_max_real: int | None
    real_attainment: SolvabilityVerdict | None
    real_infeasibility_level: int | None
    real_certificate: dict | None
    cap: int
    cap_reached: bool
    numeric_crosscheck: dict | None = None

    @property
    def complete(self) -> bool:
        return self.mu_max_complex is not None


def mu_max_loop(
    eq: EquationSpec,
    nmax_cap: int = 12,
    order: MonomialOrder | None = None,
    eliminate: tuple[str, ...] = (),
    budget: Budget | None = None,
    real_analysis: bool = True,
    witness_hints: list[ParamPoly] | None = None,
    witness_seed: int = 0,
) -> MultiplicityReport:
    """Run the obstruction loop until the cumulative ideal is the unit ideal.

    Output: the first level k whose ideal of obstructions has no complex
    solutions gives mu_max(complex) = k; the previous level's basis describes
    the variety of classes attaining it.  Real analysis is layered on top:
    exact infeasibility patterns bound mu_max(real), and the witness search
    certifies attainment.  If the cap is reached without a unit ideal the
    report says so explicitly (no complex-center exclusion up to the cap).
    """
    proc = EtaProcess(eq, order=order, eliminate=eliminate, budget=budget)
    mu_complex = None
    vmax = None
    real_level = None
    real_cert = None
    real_params = set(eq.real_params())

    while proc.level < nmax_cap:
        entry = proc.advance()
        n = entry.n
        basis = proc.seq.current_basis()
        if entry.kind == "generator" and basis is not None:
            if basis.is_unit:
                mu_complex = n
                prev_levels = [m for m in proc.seq.bases if m < n]
                vmax = proc.seq.bases[max(prev_levels)] if prev_levels else None
                break
            if real_analysis and real_level is None:
                cert = real_infeasible_by_pattern(
                    list(proc.seq.generators) + list(basis.generators), real_params
                )
                if cert is not None:
                    real_level = n
                    real_cert = cert

    cap_reached = mu_complex is None
    if mu_complex is not None and real_level is None:
        # no earlier real obstruction: real and complex maxima coincide
        real_level = mu_complex
        real_cert = {"kind": "empty-complex-variety"}

    mu_real = real_level
    attainment = None
    if real_analysis and real_level is not None:
        prev_levels = [m for m in proc.seq.bases if m < real_level]
        if prev_levels:
            prev_basis = proc.seq.bases[max(prev_levels)]
            attainment = find_real_witness(
                prev_basis,
                budget=proc.budget,
                hint_slices=witness_hints,
                seed=witness_seed,
            )
        else:
            # no earlier generators: every real parameter point attains
            attainment = SolvabilityVerdict(
                complex_solvable=True,
                real_witness={},
                real_status="witness-found",
                certificate={"kind": "zero-ideal"},
            )

    return MultiplicityReport(
        label=eq.label,
        order=proc.seq.order,
        sequence=proc.seq,
        mu_max_complex=mu_complex,
        vmax_basis=vmax,
        mu_max_real=mu_real,
        real_attainment=attainment,
        real_infeasibility_level=real_level,
        real_certificate=real_cert,
        cap=nmax_cap,
        cap_reached=cap_reached,
    )
