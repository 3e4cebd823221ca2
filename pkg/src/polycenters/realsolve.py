"""Real-solvability tools: Sturm isolation, sign patterns, witness search.

Real solvability is not decided in general here (no cylindrical algebraic
decomposition); the verdict is three-valued and each outcome carries its
certificate:

* ``infeasible-by-pattern`` - exact: either a generator is sign-definite over
  the reals (even powers, one sign, matching constant), or even-power
  generators force a set of variables to zero and substituting those zeros
  leaves a nonzero constant, or the elimination polynomial of a
  zero-dimensional ideal has no real roots (Sturm count zero).
* ``witness-found`` - a numerically sampled and polished solution, reported
  at rational coordinates whose exact residuals are small relative to the
  evaluated term sizes (backward error), together with the refinement data.
* ``unknown`` - a perfectly valid outcome.

Univariate real-root isolation is exact: Sturm chains over the rationals on
the squarefree part, with isolating intervals refined by exact-sign bisection.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .groebner import Budget, BudgetExceeded, IdealBasis, buchberger
from .parampoly import MonomialOrder, ParamPoly
from .rationals import GaussianRational, RAT, RAT_ONE, RAT_ZERO, rat_str, rat_to_fraction


# -- exact univariate machinery -----------------------------------------------


def _strip(coeffs: list) -> list:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _eval(coeffs: list, x) -> object:
    acc = RAT_ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deriv(coeffs: list) -> list:
    return [c * i for i, c in enumerate(coeffs)][1:]


def _rem(a: list, b: list) -> list:
    """Remainder of exact division a mod b (b nonzero)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        factor = a[-1] / lb
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - factor * c
        a.pop()
        _strip(a)
    return a


def _primitive_scaled(coeffs: list) -> list:
    """Scale by a positive rational to integer-primitive form (sign preserved).

    Positive scaling is the only normalization a Sturm chain tolerates.
    """
    if not coeffs:
        return coeffs
    from .groebner import _gcd, _lcm  # backend-aware helpers

    g = 0
    l = 1
    for c in coeffs:
        if c:
            g = _gcd(g, c.numerator)
            l = _lcm(l, c.denominator)
    scale = RAT(l, g)
    if scale == RAT_ONE:
        return list(coeffs)
    return [c * scale for c in coeffs]


def _primitive_positive(coeffs: list) -> list:
    """Integer-primitive with positive lead; fine for gcd work, not for chains."""
    out = _primitive_scaled(coeffs)
    if out and out[-1] < 0:
        out = [-c for c in out]
    return out


def _gcd_poly(a: list, b: list) -> list:
    a, b = _strip(list(a)), _strip(list(b))
    while b:
        a, b = b, _strip(_rem(a, b))
        if b:
            b = _primitive_positive(b)
    return _primitive_positive(a)


def _squarefree(coeffs: list) -> list:
    d = _deriv(coeffs)
    if not _strip(list(d)):
        return coeffs
    g = _gcd_poly(coeffs, d)
    if len(g) <= 1:
        return coeffs
    q, r = _divmod_poly(coeffs, g)
    assert not r, "gcd division must be exact"
    return _primitive_positive(q)


def _divmod_poly(a: list, b: list):
    a = list(a)
    q = [RAT_ZERO] * max(0, len(a) - len(b) + 1)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        factor = a[-1] / lb
        shift = len(a) - 1 - db
        q[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - factor * c
        a.pop()
        _strip(a)
    return _strip(q), a


def sturm_chain(coeffs: list) -> list[list]:
    chain = [_primitive_scaled(coeffs)]
    d = _strip(_deriv(coeffs))
    if d:
        chain.append(_primitive_scaled(d))
    while len(chain[-1]) > 1:
        r = _strip(_rem(chain[-2], chain[-1]))
        if not r:
            break
        chain.append(_primitive_scaled([-c for c in r]))
    return chain


def _sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def _variations(signs: list[int]) -> int:
    v = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            v += 1
        prev = s
    return v


def _var_at(chain: list[list], x) -> int:
    return _variations([_sign(_eval(p, x)) for p in chain])


def _var_at_inf(chain: list[list], positive: bool) -> int:
    signs = []
    for p in chain:
        s = _sign(p[-1])
        if not positive and (len(p) - 1) % 2 == 1:
            s = -s
        signs.append(s)
    return _variations(signs)


@dataclass(frozen=True)
class RootIsolation:
    """Distinct real roots of a univariate polynomial: count plus isolating intervals."""

    variable: str
    count: int
    intervals: tuple[tuple[object, object], ...]  # exact rational (lo, hi), lo < root < hi


def _cauchy_bound(coeffs: list):
    lead = coeffs[-1]
    m = max(abs(c / lead) for c in coeffs[:-1]) if len(coeffs) > 1 else RAT_ZERO
    return RAT_ONE + m


def isolate_real_roots(coeffs: list) -> list[tuple]:
    """Isolating open intervals with non-root rational endpoints, squarefree input."""
    chain = sturm_chain(coeffs)
    bound = _cauchy_bound(coeffs)
    lo, hi = -bound - 1, bound + 1

    def nonroot(x):
        step = RAT(1, 7)
        while not _eval(coeffs, x):
            x = x + step
            step = step / 2
        return x

    lo, hi = nonroot(lo), nonroot(hi)
    out = []

    def recurse(a, b, va, vb):
        n = va - vb
        if n == 0:
            return
        if n == 1:
            out.append((a, b))
            return
        mid = nonroot((a + b) / 2)
        vm = _var_at(chain, mid)
        recurse(a, mid, va, vm)
        recurse(mid, b, vm, vb)

    recurse(lo, hi, _var_at(chain, lo), _var_at(chain, hi))
    out.sort(key=lambda iv: iv[0])
    return out


def refine_root(coeffs: list, interval: tuple, width) -> tuple:
    """Shrink an isolating interval by exact-sign bisection to the given width."""
    a, b = interval
    fa = _eval(coeffs, a)
    sa = _sign(fa)
    while b - a > width:
        mid = (a + b) / 2
        fm = _eval(coeffs, mid)
        if not fm:
            eps = (b - a) / 1024
            a, b = mid - eps, mid + eps
            break
        if _sign(fm) == sa:
            a = mid
        else:
            b = mid
    return a, b


def poly_to_univariate(p: ParamPoly) -> tuple[str, list]:
    """(variable name, ascending real rational coefficients); raises if unsuitable."""
    used = p.variables_used()
    if len(used) != 1:
        raise ValueError(f"polynomial is not univariate: variables {used}")
    name = used[0]
    idx = p.variables.index(name)
    deg = max(e[idx] for e in p.terms)
    coeffs = [RAT_ZERO] * (deg + 1)
    for exps, coef in p.terms.items():
        if not coef.is_real:
            raise ValueError("univariate isolation needs real coefficients")
        coeffs[exps[idx]] = coeffs[exps[idx]] + coef.re
    return name, _strip(coeffs)


def univariate_real_roots(p: ParamPoly) -> RootIsolation:
    """Sturm-based isolation of the distinct real roots of a univariate polynomial."""
    name, coeffs = poly_to_univariate(p)
    if len(coeffs) <= 1:
        raise ValueError("constant polynomial")
    sf = _squarefree(coeffs)
    intervals = isolate_real_roots(sf)
    return RootIsolation(name, len(intervals), tuple(intervals))


# -- sign-pattern infeasibility --------------------------------------------------


def _even_sign_definite(p: ParamPoly, real_vars: set[str]):
    """Classify p as even-power sign-definite: returns (sign, const, pure_vars) or None.

    sign is the common sign of the non-constant coefficients, const the
    constant coefficient (same sign or zero), pure_vars the variables that
    appear as a lone even power and are hence forced to zero when p = 0.
    """
    sign = 0
    const = RAT_ZERO
    pure = set()
    for exps, coef in p.terms.items():
        if not coef.is_real:
            return None
        if not any(exps):
            const = const + coef.re
            continue
        support = [
            (v, e) for v, e in zip(p.variables, exps) if e
        ]
        if any(e % 2 for _v, e in support):
            return None
        if any(v not in real_vars for v, _e in support):
            return None
        s = _sign(coef.re)
        if sign and s != sign:
            return None
        sign = s
        if len(support) == 1:
            pure.add(support[0][0])
    if sign == 0:
        return None
    if const and _sign(const) != sign:
        return None
    return sign, const, pure


def real_infeasible_by_pattern(gens, real_vars) -> dict | None:
    """Exact real-infeasibility certificate for the system gens = 0, or None.

    Iterates: sign-definite generators with a matching nonzero constant are
    never zero over the reals; sign-definite generators without a constant
    force their pure even-power variables to zero; substituted zeros may leave
    a nonzero constant behind.
    """
    real_vars = set(real_vars)
    work = [g for g in gens if not g.is_zero]
    forced: list[str] = []
    steps: list[dict] = []
    for _round in range(1 + sum(len(g.variables) for g in work)):
        new_zero: set[str] = set()
        for g in work:
            if g.is_constant:
                return {
                    "kind": "constant-residue",
                    "forced_zero": list(forced),
                    "residue": str(g),
                    "steps": steps,
                }
            info = _even_sign_definite(g, real_vars)
            if info is None:
                continue
            sign, const, pure = info
            if const:
                return {
                    "kind": "sign-definite",
                    "generator": str(g),
                    "sign": sign,
                    "forced_zero": list(forced),
                    "steps": steps,
                }
            new_zero |= {v for v in pure if v not in forced}
        if not new_zero:
            return None
        for v in sorted(new_zero):
            forced.append(v)
        steps.append({"forced_zero": sorted(new_zero)})
        work = [
            g2
            for g in work
            for g2 in [_substitute_zeros(g, new_zero)]
            if not g2.is_zero
        ]
    return None


def _substitute_zeros(p: ParamPoly, names) -> ParamPoly:
    out = p
    for name in names:
        out = out.substitute(name, ParamPoly.constant(0))
    return out


# -- witness search ----------------------------------------------------------------


@dataclass
class SolvabilityVerdict:
    """Three-outcome real-solvability result with its supporting artifacts."""

    complex_solvable: bool
    real_witness: dict | None
    real_status: str  # witness-found | infeasible-by-pattern | unknown
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "complex_solvable": self.complex_solvable,
            "real_status": self.real_status,
            "real_witness": self.real_witness,
            "certificate": self.certificate,
        }


def _mpf_to_fraction(x) -> Fraction:
    """Exact rational value of an mpmath float."""
    sign, man, exp, _bc = mpmath.mpf(x)._mpf_
    if man == 0:
        return Fraction(0)
    value = Fraction(man if not sign else -man)
    if exp >= 0:
        return value * (1 << exp)
    return value / (1 << (-exp))


def _float(q) -> float:
    f = rat_to_fraction(q)
    if f.denominator == 0:
        raise ZeroDivisionError
    # scale huge integers before converting
    try:
        return f.numerator / f.denominator
    except OverflowError:
        return float(mpmath.mpf(f.numerator) / mpmath.mpf(f.denominator))


def _poly_scale_at(g: ParamPoly, point: dict) -> float:
    """max |coefficient * monomial(point)|: the natural residual scale."""
    best = 0.0
    for exps, coef in g.terms.items():
        val = abs(coef.to_complex())
        for v, e in zip(g.variables, exps):
            if e:
                val *= abs(point[v]) ** e
        best = max(best, val)
    return max(best, 1.0)


def _eval_exact_abs(g: ParamPoly, point_exact: dict):
    val = g.eval_exact(point_exact)
    return abs(val.to_complex())


def find_real_witness(
    basis: IdealBasis,
    budget: Budget | None = None,
    hint_slices: list[ParamPoly] | None = None,
    seed: int = 0,
    max_branches: int = 64,
    residual_rtol: float = 1e-18,
) -> SolvabilityVerdict:
    """Search for a real solution of the basis's ideal; three-valued outcome.

    The search runs a lex triangular solve (numeric roots branch by branch),
    polishes candidates at high precision, rationalizes the coordinates and
    verifies exact residuals against the evaluated term scale.  Positive-
    dimensional ideals are sliced: hint slices first, then seeded random
    rational hyperplanes.  'unknown' is a valid outcome.
    """
    budget = budget or Budget()
    if basis.is_unit:
        return SolvabilityVerdict(
            complex_solvable=False,
            real_witness=None,
            real_status="infeasible-by-pattern",
            certificate={"kind": "empty-complex-variety"},
        )
    if not basis.generators:
        return SolvabilityVerdict(
            complex_solvable=True,
            real_witness={},
            real_status="witness-found",
            certificate={"kind": "zero-ideal"},
        )
    real_vars = set()
    for g in basis.generators:
        real_vars.update(g.variables_used())
    cert = real_infeasible_by_pattern(basis.generators, real_vars)
    if cert is not None:
        return SolvabilityVerdict(
            complex_solvable=True,
            real_witness=None,
            real_status="infeasible-by-pattern",
            certificate=cert,
        )

    rng = random.Random(seed)
    attempts = [list(hint_slices)] if hint_slices else []
    attempts.append([])
    for _ in range(4):
        attempts.append(None)  # placeholder: random slices chosen on demand

    for attempt in attempts:
        try:
            verdict = _witness_attempt(
                basis, attempt, rng, budget, max_branches, residual_rtol
            )
        except BudgetExceeded:
            continue
        if verdict is not None:
            return verdict
    return SolvabilityVerdict(
        complex_solvable=True,
        real_witness=None,
        real_status="unknown",
        certificate={"kind": "search-exhausted"},
    )


def _witness_attempt(basis, slices, rng, budget, max_branches, residual_rtol):
    order = basis.order
    gens = list(basis.generators)
    var_order = list(order.variable_order)
    lex_order = MonomialOrder("lex", tuple(var_order))
    extra = list(slices) if slices else []
    lexgb = buchberger(gens + extra, lex_order, budget, postcheck=False)
    if lexgb.is_unit:
        if not extra:
            return SolvabilityVerdict(
                complex_solvable=False,
                real_witness=None,
                real_status="infeasible-by-pattern",
                certificate={"kind": "empty-complex-variety"},
            )
        return None  # the slice was unlucky

    # solve variables from the lex-deepest upward
    used_vars = set()
    for g in lexgb.generators:
        used_vars.update(g.variables_used())
    solve_vars = [v for v in var_order if v in used_vars]

    # exact infeasibility shortcut: a univariate generator with no real roots
    for g in lexgb.generators:
        used = g.variables_used()
        if len(used) == 1:
            try:
                iso = univariate_real_roots(g)
            except ValueError:
                continue
            if iso.count == 0 and not slices:
                return SolvabilityVerdict(
                    complex_solvable=True,
                    real_witness=None,
                    real_status="infeasible-by-pattern",
                    certificate={
                        "kind": "no-real-root-of-elimination",
                        "variable": iso.variable,
                        "generator": str(g),
                    },
                )
            if iso.count == 0:
                return None

    candidates = _triangular_solve(
        lexgb.generators, solve_vars, rng, max_branches
    )
    if not candidates:
        return None
    mpmath.mp.dps = 60
    for cand in candidates:
        polished = _polish(lexgb.generators, solve_vars, cand)
        if polished is None:
            continue
        point_exact = {
            v: GaussianRational(RAT(_mpf_to_fraction(val).limit_denominator(10 ** 30)))
            for v, val in polished.items()
        }
        point_float = {v: float(mpmath.mpf(val)) for v, val in polished.items()}
        ok = True
        worst = 0.0
        for g in gens:
            scale = _poly_scale_at(g, point_float)
            res = _eval_exact_abs(g, point_exact) / scale
            worst = max(worst, res)
            if res > residual_rtol:
                ok = False
                break
        if ok:
            witness = {v: rat_str(point_exact[v].re) for v in polished}
            return SolvabilityVerdict(
                complex_solvable=True,
                real_witness=witness,
                real_status="witness-found",
                certificate={
                    "kind": "polished-root",
                    "residual_rtol": worst,
                    "slices": [str(s) for s in (slices or [])],
                },
            )
    return None


def _triangular_solve(gens, solve_vars, rng, max_branches):
    """Back-substitution over the lex triangle with numpy roots; real branches only."""
    import numpy as np

    by_var: dict[str, list[ParamPoly]] = {v: [] for v in solve_vars}
    order_pos = {v: i for i, v in enumerate(solve_vars)}

    def deepest(g):
        used = g.variables_used()
        return max(used, key=lambda v: -order_pos[v])

    partial = [({}, 0.0)]
    for v in reversed(solve_vars):
        next_partial = []
        for assign, _score in partial:
            cands = []
            for g in gens:
                unassigned = [u for u in g.variables_used() if u not in assign]
                if unassigned == [v]:
                    cands.append(g)
            if not cands:
                # free variable under this slice: pick a small random rational
                val = rng.choice([0.0, 1.0, -1.0, 0.5, 2.0, -0.5])
                a2 = dict(assign)
                a2[v] = val
                next_partial.append((a2, 0.0))
                continue
            cands.sort(key=lambda g: g.degree_in(v))
            g = cands[0]
            coeffs = _numeric_univariate(g, v, assign)
            if coeffs is None:
                continue
            roots = np.roots(coeffs[::-1]) if len(coeffs) > 1 else []
            scale = max(1.0, max(abs(r) for r in roots) if len(roots) else 1.0)
            for r in roots:
                if abs(r.imag) > 1e-7 * scale:
                    continue
                a2 = dict(assign)
                a2[v] = float(r.real)
                ok = True
                for other in cands[1:]:
                    val = other.eval_complex({**a2, v: a2[v]})
                    if abs(val) > 1e-4 * _poly_scale_at(other, {u: abs(complex(x)) for u, x in a2.items()}):
                        ok = False
                        break
                if ok:
                    next_partial.append((a2, 0.0))
            if len(next_partial) > max_branches:
                next_partial = next_partial[:max_branches]
        partial = next_partial
        if not partial:
            return []
    return [assign for assign, _ in partial]


def _numeric_univariate(g: ParamPoly, v: str, assign: dict):
    """Collapse g to float coefficients in v at the partial assignment."""
    idx = g.variables.index(v)
    deg = max(e[idx] for e in g.terms)
    coeffs = [0.0] * (deg + 1)
    maxmag = 0.0
    for exps, coef in g.terms.items():
        if not coef.is_real:
            return None
        val = _float(coef.re)
        for name, e in zip(g.variables, exps):
            if name == v or not e:
                continue
            val *= assign[name] ** e
        coeffs[exps[idx]] += val
        maxmag = max(maxmag, abs(val))
    if maxmag == 0.0:
        return None
    coeffs = [c / maxmag for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs.pop()
    return coeffs


def _polish(gens, solve_vars, assign):
    """Re-solve the triangular chain at high precision from the float seed."""
    out = {v: mpmath.mpf(assign[v]) for v in assign}
    order_pos = {v: i for i, v in enumerate(solve_vars)}
    for v in reversed(solve_vars):
        cands = []
        for g in gens:
            unassigned = [u for u in g.variables_used() if order_pos.get(u, -1) < order_pos[v]]
            if not unassigned and v in g.variables_used():
                deeper_ok = all(
                    order_pos.get(u, 10 ** 9) >= order_pos[v] for u in g.variables_used()
                )
                if deeper_ok:
                    cands.append(g)
        cands = [g for g in cands if g.degree_in(v) > 0]
        if not cands:
            continue
        cands.sort(key=lambda g: g.degree_in(v))
        g = cands[0]
        coeffs = _mp_univariate(g, v, out)
        if coeffs is None:
            return None
        f = lambda x: mpmath.polyval(coeffs[::-1], x)  # noqa: E731
        try:
            root = mpmath.findroot(f, out[v])
        except (ValueError, ZeroDivisionError, mpmath.libmp.NoConvergence):
            return None
        if abs(mpmath.im(root)) > mpmath.mpf("1e-30") * (1 + abs(root)):
            return None
        out[v] = mpmath.re(root)
    return out


def _mp_univariate(g: ParamPoly, v: str, assign: dict):
    idx = g.variables.index(v)
    deg = max(e[idx] for e in g.terms)
    coeffs = [mpmath.mpf(0)] * (deg + 1)
    for exps, coef in g.terms.items():
        if not coef.is_real:
            return None
        f = rat_to_fraction(coef.re)
        val = mpmath.mpf(f.numerator) / mpmath.mpf(f.denominator)
        for name, e in zip(g.variables, exps):
            if name == v or not e:
                continue
            val *= assign[name] ** e
        coeffs[exps[idx]] += val
    return coeffs
