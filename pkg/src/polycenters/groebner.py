"""Exact Buchberger engine over Q(i): normal forms, reduced bases, ideal equality.

Internals work on dicts mapping exponent tuples (in the monomial order's
variable space) to coefficients.  Coefficients are duck-typed field elements:
plain backend rationals when every input polynomial is real (the polynomial-
in-t classes), GaussianRational otherwise.  Generators are kept
integer-primitive between reductions to control coefficient growth; the
returned reduced basis is monic, tail-reduced, and sorted, hence unique for
the ideal and order.

Pair management uses the Gebauer-Moeller update (Buchberger's coprimality and
chain criteria applied at insertion time) and normal selection weighted by the
sugar degree; without this the five-variable degree-15 computations are
hopeless.

Monomial keys are flat integer tuples with "bigger tuple = bigger monomial",
so a componentwise negation turns heapq's min-pop into max-monomial pop.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .parampoly import MonomialOrder, ParamPoly
from .rationals import GR_ONE, GaussianRational, RAT, RAT_ONE, RAT_ZERO

try:
    from gmpy2 import gcd as _gcd, lcm as _lcm
except ImportError:  # pragma: no cover
    from math import gcd as _gcd, lcm as _lcm


class BudgetExceeded(RuntimeError):
    """Basis computation exceeded its budget; diagnostics ride along."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class Budget:
    max_pairs: int = 2_000_000
    max_basis: int = 2_000
    max_degree: int | None = None

    def check_degree(self, deg: int, stats: dict):
        if self.max_degree is not None and deg > self.max_degree:
            raise BudgetExceeded(
                "basis computation exceeded budget: degree cap", dict(stats)
            )


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class IdealBasis:
    """An ordered generator list with its monomial order."""

    generators: tuple[ParamPoly, ...]
    order: MonomialOrder
    is_groebner: bool = False

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    @property
    def is_unit(self) -> bool:
        return (
            len(self.generators) == 1
            and self.generators[0].is_constant
            and not self.generators[0].is_zero
        )

    def generator_strings(self) -> list[str]:
        return [g.to_string(self.order) for g in self.generators]


# -- flat representation helpers ---------------------------------------------


def _flat_key(order: MonomialOrder):
    """Monomial -> flat int tuple, larger tuple = larger monomial."""
    if order.kind == "lex":
        return lambda exps: exps
    n = len(order.variable_order)
    rng = tuple(range(n - 1, -1, -1))

    def key(exps):
        return (sum(exps),) + tuple(-exps[i] for i in rng)

    return key


def _neg_key(k):
    return tuple(-x for x in k)


def _poly_to_dict(p: ParamPoly, order: MonomialOrder, realcoef: bool) -> dict:
    missing = set(p.variables_used()) - set(order.variable_order)
    if missing:
        raise ValueError(f"order does not cover variables {sorted(missing)}")
    amap = order.align_map(p.variables)
    out = {}
    for exps, coef in p.terms.items():
        key = tuple(exps[i] if i >= 0 else 0 for i in amap)
        cur = out.get(key)
        val = coef.re if realcoef else coef
        cur = val if cur is None else cur + val
        if cur:
            out[key] = cur
        else:
            out.pop(key, None)
    return out


def _dict_to_poly(d: dict, order: MonomialOrder, realcoef: bool) -> ParamPoly:
    names = order.variable_order
    sorted_names = tuple(sorted(names))
    perm = [names.index(v) for v in sorted_names]
    terms = {}
    for exps, coef in d.items():
        if realcoef:
            coef = GaussianRational(coef, RAT_ZERO)
        terms[tuple(exps[i] for i in perm)] = coef
    return ParamPoly(sorted_names, terms, _checked=True).compact()


def _all_real(polys) -> bool:
    return all(c.is_real for p in polys for c in p.terms.values())


def _content_strip(d: dict, realcoef: bool) -> dict:
    """Scale to an integer-primitive dict (real path) or normalized dict (complex path)."""
    if not d:
        return d
    if realcoef:
        nums = [c.numerator for c in d.values()]
        dens = [c.denominator for c in d.values()]
        g = 0
        for x in nums:
            g = _gcd(g, x)
        l = 1
        for x in dens:
            l = _lcm(l, x)
        scale = RAT(l, g)
        if scale == RAT_ONE:
            return d
        return {e: c * scale for e, c in d.items()}
    parts = []
    for c in d.values():
        if c.re:
            parts.append(c.re)
        if c.im:
            parts.append(c.im)
    g = 0
    for x in parts:
        g = _gcd(g, x.numerator)
    l = 1
    for x in parts:
        l = _lcm(l, x.denominator)
    scale = GaussianRational(RAT(l, g), RAT_ZERO)
    if scale == GR_ONE:
        return d
    return {e: c * scale for e, c in d.items()}


def _leading(d: dict, key):
    lm = max(d, key=key)
    return lm, d[lm]


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _exp_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _exp_sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _exp_add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _shift(d: dict, mono: tuple) -> dict:
    if not any(mono):
        return dict(d)
    return {_exp_add(e, mono): c for e, c in d.items()}


# -- reduction -----------------------------------------------------------------


def _reduce_full(f: dict, gens: list, key, stats=None) -> dict:
    """Full remainder of f on division by gens.

    gens entries are (lm, lc, items) where items lists (exp, coef) including
    the leading term.  Deterministic: monomials processed in decreasing order,
    first dividing generator wins (gens order is fixed by the caller).
    """
    work = dict(f)
    if not work:
        return work
    rem: dict = {}
    heap = []
    for e in work:
        heapq.heappush(heap, (_neg_key(key(e)), e))
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None or not c:
            continue
        hit = None
        for lm, lc, items in gens:
            if _divides(lm, m):
                hit = (lm, lc, items)
                break
        if hit is None:
            rem[m] = c
            continue
        lm, lc, items = hit
        factor = c / lc
        shift = _exp_sub(m, lm)
        if stats is not None:
            stats["reduction_steps"] = stats.get("reduction_steps", 0) + 1
        if not any(shift):
            for e, gc in items:
                if e == lm:
                    continue
                cur = work.get(e)
                if cur is None:
                    work[e] = -factor * gc
                    heapq.heappush(heap, (_neg_key(key(e)), e))
                else:
                    s = cur - factor * gc
                    if s:
                        work[e] = s
                    else:
                        del work[e]
        else:
            for e, gc in items:
                if e == lm:
                    continue
                e2 = _exp_add(e, shift)
                cur = work.get(e2)
                if cur is None:
                    work[e2] = -factor * gc
                    heapq.heappush(heap, (_neg_key(key(e2)), e2))
                else:
                    s = cur - factor * gc
                    if s:
                        work[e2] = s
                    else:
                        del work[e2]
    return rem


def _gen_entry(d: dict, key):
    lm, lc = _leading(d, key)
    return (lm, lc, list(d.items()))


# -- the Buchberger loop ---------------------------------------------------------


def _sugar(d: dict, key) -> int:
    return max(sum(e) for e in d)


def _buchberger_raw(seed: list[dict], key, budget: Budget, stats: dict) -> list[dict]:
    """Groebner basis (not yet reduced) of the nonzero dicts in seed."""
    gens: list[dict] = []
    entries: list = []
    sugars: list[int] = []
    alive: list[bool] = []
    pairs: set[tuple[int, int]] = set()
    heap: list = []

    def lm(i):
        return entries[i][0]

    def pair_data(i, j):
        l = _exp_lcm(lm(i), lm(j))
        sug = max(sugars[i] + sum(_exp_sub(l, lm(i))), sugars[j] + sum(_exp_sub(l, lm(j))))
        return l, sug

    def push_pair(i, j):
        l, sug = pair_data(i, j)
        pairs.add((i, j))
        heapq.heappush(heap, ((sug,) + key(l), i, j, l))

    def add_generator(d: dict):
        """Gebauer-Moeller update with the new generator d."""
        nonlocal pairs
        h = len(entries)
        gens.append(d)
        entries.append(_gen_entry(d, key))
        sugars.append(_sugar(d, key))
        alive.append(True)
        lmh = lm(h)
        # criterion B: prune old pairs whose lcm is a proper multiple through lmh
        kept = set()
        for (i, j) in pairs:
            l = _exp_lcm(lm(i), lm(j))
            if (
                _divides(lmh, l)
                and _exp_lcm(lm(i), lmh) != l
                and _exp_lcm(lm(j), lmh) != l
            ):
                continue
            kept.add((i, j))
        pairs = kept
        # candidate new pairs, pruned by criterion M/F then the product criterion
        cands = [i for i in range(h) if alive[i]]
        lcms = {i: _exp_lcm(lm(i), lmh) for i in cands}
        chosen = []
        for i in cands:
            li = lcms[i]
            drop = False
            for j in cands:
                if j == i:
                    continue
                lj = lcms[j]
                if lj != li and _divides(lj, li):
                    drop = True
                    break
            if not drop:
                chosen.append(i)
        seen_lcms: set = set()
        for i in chosen:
            li = lcms[i]
            if li in seen_lcms:
                continue
            seen_lcms.add(li)
            if li == _exp_add(lm(i), lmh):  # coprime leading monomials
                continue
            push_pair(i, h)
        # generators whose lead is now divisible stop generating pairs
        for i in range(h):
            if alive[i] and _divides(lmh, lm(i)):
                alive[i] = False

    realcoef = stats.get("realcoef", True)
    for d in seed:
        if d:
            add_generator(_content_strip(d, realcoef))
        if len(gens) > budget.max_basis:
            raise BudgetExceeded("basis computation exceeded budget: basis size", dict(stats))

    while heap:
        sortkey, i, j, l = heapq.heappop(heap)
        if (i, j) not in pairs:
            continue
        pairs.discard((i, j))
        stats["pairs_processed"] = stats.get("pairs_processed", 0) + 1
        if stats["pairs_processed"] > budget.max_pairs:
            raise BudgetExceeded("basis computation exceeded budget: pair cap", dict(stats))
        lmi, lci, itemsi = entries[i]
        lmj, lcj, itemsj = entries[j]
        # S-polynomial, kept integral on the real path by cross-multiplication
        si = _shift(gens[i], _exp_sub(l, lmi))
        sj = _shift(gens[j], _exp_sub(l, lmj))
        s: dict = {}
        for e, c in si.items():
            s[e] = c * lcj
        for e, c in sj.items():
            cur = s.get(e)
            if cur is None:
                s[e] = -c * lci
            else:
                v = cur - c * lci
                if v:
                    s[e] = v
                else:
                    del s[e]
        active = [entries[t] for t in range(len(entries))]
        r = _reduce_full(s, active, key, stats)
        if r:
            r = _content_strip(r, realcoef)
            budget.check_degree(_sugar(r, key), stats)
            add_generator(r)
            if len(gens) > budget.max_basis:
                raise BudgetExceeded(
                    "basis computation exceeded budget: basis size", dict(stats)
                )
    return gens


def _reduce_basis(gens: list[dict], key, realcoef: bool) -> list[dict]:
    """Minimal then tail-reduced monic-free basis (still integer-primitive)."""
    entries = [(max(d, key=key), d) for d in gens if d]
    # minimal: drop any generator whose lead is divisible by another's
    entries.sort(key=lambda t: key(t[0]))
    minimal = []
    for lm_d, d in entries:
        if any(_divides(lm_k, lm_d) for lm_k, _k in minimal if lm_k != lm_d):
            continue
        if any(lm_k == lm_d for lm_k, _k in minimal):
            continue
        minimal.append((lm_d, d))
    # tail reduction to fixpoint
    changed = True
    polys = [d for _, d in minimal]
    while changed:
        changed = False
        for idx in range(len(polys)):
            others = [
                _gen_entry(polys[t], key) for t in range(len(polys)) if t != idx
            ]
            r = _reduce_full(polys[idx], others, key)
            r = _content_strip(r, realcoef)
            if r != polys[idx]:
                polys[idx] = r
                changed = True
        polys = [p for p in polys if p]
    polys.sort(key=lambda d: key(max(d, key=key)))
    return polys


def _monic_poly(p: ParamPoly, order: MonomialOrder) -> ParamPoly:
    return p.monic(order)


def buchberger(
    generators,
    order: MonomialOrder,
    budget: Budget | None = None,
    postcheck: bool = True,
) -> IdealBasis:
    """Reduced Groebner basis (monic, tail-reduced, sorted) for the given order.

    Deterministic for a given generator set and order; recomputation from a
    shuffled or rescaled generating set returns the identical basis.  Raises
    BudgetExceeded with partial diagnostics when the configured caps trip.
    """
    budget = budget or DEFAULT_BUDGET
    gens = [g for g in generators if isinstance(g, ParamPoly) and not g.is_zero]
    if not gens:
        return IdealBasis((), order, is_groebner=True)
    realcoef = _all_real(gens)
    key = _flat_key(order)
    seed = [_poly_to_dict(g, order, realcoef) for g in gens]
    seed.sort(key=lambda d: (key(max(d, key=key)), len(d)))
    stats = {"realcoef": realcoef, "pairs_processed": 0}
    raw = _buchberger_raw(seed, key, budget, stats)
    reduced = _reduce_basis(raw, key, realcoef)
    out = tuple(
        _monic_poly(_dict_to_poly(d, order, realcoef), order) for d in reduced
    )
    basis = IdealBasis(out, order, is_groebner=True)
    if postcheck:
        assert_groebner(basis)
    return basis


def assert_groebner(basis: IdealBasis):
    """Post-hoc Buchberger criterion: every S-polynomial reduces to zero."""
    key = _flat_key(basis.order)
    realcoef = _all_real(basis.generators)
    dicts = [_poly_to_dict(g, basis.order, realcoef) for g in basis.generators]
    entries = [_gen_entry(d, key) for d in dicts]
    for i in range(len(dicts)):
        for j in range(i + 1, len(dicts)):
            lmi, lci, _ = entries[i]
            lmj, lcj, _ = entries[j]
            l = _exp_lcm(lmi, lmj)
            if l == _exp_add(lmi, lmj):
                continue
            s: dict = {}
            for e, c in _shift(dicts[i], _exp_sub(l, lmi)).items():
                s[e] = c * lcj
            for e, c in _shift(dicts[j], _exp_sub(l, lmj)).items():
                cur = s.get(e)
                if cur is None:
                    s[e] = -c * lci
                else:
                    v = cur - c * lci
                    if v:
                        s[e] = v
                    else:
                        del s[e]
            r = _reduce_full(s, entries, key)
            if r:
                raise AssertionError("returned basis fails the Buchberger criterion")


def normal_form(p: ParamPoly, basis: IdealBasis | list, order: MonomialOrder | None = None) -> ParamPoly:
    """Remainder of multivariate division of p by the basis generators.

    No monomial of the result is divisible by any generator's leading
    monomial.  When the basis is a Groebner basis this is the canonical
    normal form modulo the ideal.
    """
    if isinstance(basis, IdealBasis):
        gens = list(basis.generators)
        order = basis.order
    else:
        gens = list(basis)
        if order is None:
            raise ValueError("order required when basis is a plain list")
    gens = [g for g in gens if not g.is_zero]
    if not gens or p.is_zero:
        return p
    realcoef = _all_real(gens + [p])
    key = _flat_key(order)
    gdicts = [_poly_to_dict(g, order, realcoef) for g in gens]
    entries = [_gen_entry(d, key) for d in gdicts]
    f = _poly_to_dict(p, order, realcoef)
    r = _reduce_full(f, entries, key)
    return _dict_to_poly(r, order, realcoef)


def ideal_equal(a: IdealBasis, b: IdealBasis, budget: Budget | None = None) -> bool:
    """True iff both generator sets cut out the same ideal (mutual reduction)."""
    ga = a if a.is_groebner else buchberger(a.generators, a.order, budget, postcheck=False)
    gb = b if b.is_groebner else buchberger(b.generators, b.order, budget, postcheck=False)
    for g in b.generators:
        if not normal_form(g, ga).is_zero:
            return False
    for g in a.generators:
        if not normal_form(g, gb).is_zero:
            return False
    return True


def unit_basis(order: MonomialOrder) -> IdealBasis:
    return IdealBasis((ParamPoly.constant(1),), order, is_groebner=True)
