"""Exact multivariate polynomials over Q(i) in named parameters.

Representation: a ``ParamPoly`` holds a sorted tuple of variable names and a
dict mapping dense exponent tuples (one entry per variable) to nonzero
``GaussianRational`` coefficients.  The zero polynomial is the empty dict.
Variable counts stay small here (at most six or seven per coefficient class),
so dense exponent vectors win on simplicity over sparse pairs.

Polynomials built over different variable lists merge by name automatically:
obstruction polynomials for different coefficient classes reuse the same
letters, so name-based merging is the only sane convention.

Monomial orders (lex and graded reverse lex) are value objects carrying their
own variable order, which may permute the polynomial's alphabetical storage
order; the engine maps exponents between the two spaces at the boundary.

The reserved variable name ``pi`` represents the circle constant: evaluation
of time expressions at a period that is a multiple of pi produces it, and the
normalization step strips it back out as a positive unit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rationals import (
    GR_ONE,
    GR_ZERO,
    GaussianRational,
    RAT,
    RAT_ONE,
    RAT_ZERO,
    rat_from_decimal,
    rat_str,
    scalar_str,
)

PI_NAME = "pi"
RESERVED_NAMES = {"i", "t", "cos", "sin"}


@dataclass(frozen=True)
class MonomialOrder:
    """A total order on monomials: 'lex' or 'grevlex' over an explicit variable order."""

    kind: str
    variable_order: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex"):
            raise ValueError(f"unknown monomial order kind {self.kind!r}")
        object.__setattr__(self, "variable_order", tuple(self.variable_order))
        if len(set(self.variable_order)) != len(self.variable_order):
            raise ValueError("duplicate variable in order")

    def key(self, exps: tuple[int, ...]):
        """Sort key: larger key = larger monomial. ``exps`` lives in this order's space."""
        if self.kind == "lex":
            return exps
        return (sum(exps), tuple(-e for e in reversed(exps)))

    def align_map(self, variables: tuple[str, ...]) -> list[int]:
        """Position of each of this order's variables inside ``variables`` (-1 if absent)."""
        pos = {name: idx for idx, name in enumerate(variables)}
        return [pos.get(name, -1) for name in self.variable_order]


def grevlex(*names: str) -> MonomialOrder:
    return MonomialOrder("grevlex", tuple(names))


def lex(*names: str) -> MonomialOrder:
    return MonomialOrder("lex", tuple(names))


class ParamPoly:
    """Immutable exact polynomial over Q(i) in named parameters."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables=(), terms=None, _checked=False):
        variables = tuple(variables)
        if terms is None:
            terms = {}
        if not _checked:
            if list(variables) != sorted(variables):
                raise ValueError("variables must be sorted; use ParamPoly.build")
            nvars = len(variables)
            clean = {}
            for exps, coef in terms.items():
                if len(exps) != nvars:
                    raise ValueError("exponent vector length mismatch")
                if not isinstance(coef, GaussianRational):
                    coef = GaussianRational(coef)
                if coef:
                    clean[tuple(exps)] = coef
            terms = clean
        self.variables = variables
        self.terms = terms

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "ParamPoly":
        return _ZERO

    @staticmethod
    def constant(value) -> "ParamPoly":
        if not isinstance(value, GaussianRational):
            value = GaussianRational(value)
        if not value:
            return _ZERO
        return ParamPoly((), {(): value}, _checked=True)

    @staticmethod
    def variable(name: str) -> "ParamPoly":
        if name in RESERVED_NAMES:
            raise ValueError(f"{name!r} is reserved")
        return ParamPoly((name,), {(1,): GR_ONE}, _checked=True)

    @staticmethod
    def build(coeffs: dict[str, object] | None = None, const=0) -> "ParamPoly":
        """Linear combination helper: build({'a': 2, 'b': -1}, const=3) = 2a - b + 3."""
        p = ParamPoly.constant(const)
        for name, c in (coeffs or {}).items():
            p = p + ParamPoly.variable(name) * ParamPoly.constant(c)
        return p

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> GaussianRational:
        total = GR_ZERO
        for exps, coef in self.terms.items():
            if any(exps):
                raise ValueError("not a constant polynomial")
            total = total + coef
        return total

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if name not in self.variables:
            return 0
        idx = self.variables.index(name)
        return max((e[idx] for e in self.terms), default=0)

    def variables_used(self) -> tuple[str, ...]:
        used = [False] * len(self.variables)
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def compact(self) -> "ParamPoly":
        """Drop variables that appear in no term."""
        used = self.variables_used()
        if used == self.variables:
            return self
        keep = [self.variables.index(v) for v in used]
        terms = {tuple(e[i] for i in keep): c for e, c in self.terms.items()}
        return ParamPoly(used, terms, _checked=True)

    def with_variables(self, variables: tuple[str, ...]) -> "ParamPoly":
        """Re-embed into a larger sorted variable tuple."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {name: idx for idx, name in enumerate(variables)}
        missing = [v for v in self.variables if v not in pos]
        if missing:
            raise ValueError(f"target variables missing {missing}")
        n = len(variables)
        terms = {}
        for exps, coef in self.terms.items():
            out = [0] * n
            for v, e in zip(self.variables, exps):
                out[pos[v]] = e
            terms[tuple(out)] = coef
        return ParamPoly(variables, terms, _checked=True)

    # -- arithmetic --------------------------------------------------------

    def _aligned(self, other: "ParamPoly"):
        if self.variables == other.variables:
            return self, other
        merged = tuple(sorted(set(self.variables) | set(other.variables)))
        return self.with_variables(merged), other.with_variables(merged)

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._aligned(other)
        terms = dict(a.terms)
        for exps, coef in b.terms.items():
            cur = terms.get(exps)
            if cur is None:
                terms[exps] = coef
            else:
                s = cur + coef
                if s:
                    terms[exps] = s
                else:
                    del terms[exps]
        return ParamPoly(a.variables, terms, _checked=True)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly(
            self.variables, {e: -c for e, c in self.terms.items()}, _checked=True
        )

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (GaussianRational, int)):
            return self.scale(other)
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._aligned(other)
        terms: dict[tuple[int, ...], GaussianRational] = {}
        bt = list(b.terms.items())
        for e1, c1 in a.terms.items():
            for e2, c2 in bt:
                exps = tuple(x + y for x, y in zip(e1, e2))
                prod = c1 * c2
                cur = terms.get(exps)
                if cur is None:
                    terms[exps] = prod
                else:
                    s = cur + prod
                    if s:
                        terms[exps] = s
                    else:
                        del terms[exps]
        return ParamPoly(a.variables, terms, _checked=True)

    __rmul__ = __mul__

    def scale(self, scalar) -> "ParamPoly":
        if not isinstance(scalar, GaussianRational):
            scalar = GaussianRational(scalar)
        if not scalar:
            return _ZERO
        return ParamPoly(
            self.variables, {e: c * scalar for e, c in self.terms.items()}, _checked=True
        )

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = ParamPoly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        c = self.compact()
        return hash((c.variables, frozenset(c.terms.items())))

    # -- substitution and evaluation ----------------------------------------

    def substitute(self, name: str, replacement) -> "ParamPoly":
        """Exact substitution of a polynomial (or scalar) for a variable."""
        replacement = _as_poly(replacement)
        if name not in self.variables:
            return self
        idx = self.variables.index(name)
        rest_vars = tuple(v for v in self.variables if v != name)
        powers = {0: ParamPoly.constant(1)}
        maxdeg = max((e[idx] for e in self.terms), default=0)
        for d in range(1, maxdeg + 1):
            powers[d] = powers[d - 1] * replacement
        out = _ZERO
        for exps, coef in self.terms.items():
            rest = tuple(e for i, e in enumerate(exps) if i != idx)
            base = ParamPoly(rest_vars, {rest: coef}, _checked=True)
            out = out + base * powers[exps[idx]]
        return out

    def eval_exact(self, values: dict[str, GaussianRational]) -> GaussianRational:
        """Exact evaluation; every variable must be bound."""
        binds = []
        for v in self.variables:
            if v not in values:
                raise KeyError(f"unbound parameter {v!r}")
            val = values[v]
            binds.append(val if isinstance(val, GaussianRational) else GaussianRational(val))
        total = GR_ZERO
        for exps, coef in self.terms.items():
            term = coef
            for val, e in zip(binds, exps):
                if e:
                    term = term * (val ** e)
            total = total + term
        return total

    def eval_complex(self, values: dict[str, complex]) -> complex:
        total = 0j
        for exps, coef in self.terms.items():
            term = coef.to_complex()
            for v, e in zip(self.variables, exps):
                if e:
                    term *= complex(values[v]) ** e
            total += term
        return total

    def conjugate_scalars(self) -> "ParamPoly":
        """Conjugate every coefficient, leaving the (real) parameters alone."""
        return ParamPoly(
            self.variables, {e: c.conjugate() for e, c in self.terms.items()}, _checked=True
        )

    # -- leading data --------------------------------------------------------

    def leading_term(self, order: MonomialOrder):
        """Maximal (exponent vector, coefficient) under ``order``.

        The exponent vector lives in the order's variable space; raises on the
        zero polynomial and on variables the order does not cover.
        """
        if not self.terms:
            raise ValueError("no leading term: zero polynomial")
        missing = set(self.variables_used()) - set(order.variable_order)
        if missing:
            raise ValueError(f"order does not cover variables {sorted(missing)}")
        amap = order.align_map(self.variables)
        best_exps = None
        best_key = None
        best_coef = None
        key = order.key
        for exps, coef in self.terms.items():
            oe = tuple(exps[i] if i >= 0 else 0 for i in amap)
            k = key(oe)
            if best_key is None or k > best_key:
                best_key, best_exps, best_coef = k, oe, coef
        return best_exps, best_coef

    def monic(self, order: MonomialOrder) -> "ParamPoly":
        if not self.terms:
            return self
        _, lc = self.leading_term(order)
        if lc == GR_ONE:
            return self
        return self.scale(lc.inverse())

    # -- text form -----------------------------------------------------------

    def to_string(self, order: MonomialOrder | None = None) -> str:
        return poly_to_string(self, order)

    def __str__(self):
        return poly_to_string(self)

    def __repr__(self):
        return f"ParamPoly({poly_to_string(self)!r})"


_ZERO = ParamPoly((), {}, _checked=True)


def _as_poly(value):
    if isinstance(value, ParamPoly):
        return value
    if isinstance(value, (GaussianRational, int)):
        return ParamPoly.constant(value)
    if type(value) is type(RAT_ZERO):
        return ParamPoly.constant(GaussianRational(value))
    return NotImplemented


# -- spec-level operation aliases -------------------------------------------


def poly_add(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    """Exact sum with name-based variable merging."""
    return p + q


def poly_mul(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    """Exact product with name-based variable merging."""
    return p * q


def leading_term(p: ParamPoly, order: MonomialOrder):
    return p.leading_term(order)


# -- printing ----------------------------------------------------------------


def poly_to_string(p: ParamPoly, order: MonomialOrder | None = None) -> str:
    if not p.terms:
        return "0"
    if order is None:
        order = MonomialOrder("grevlex", p.variables)
    amap = order.align_map(p.variables)
    covered = set(order.variable_order)
    extra = [v for v in p.variables_used() if v not in covered]
    if extra:
        order = MonomialOrder(order.kind, tuple(order.variable_order) + tuple(sorted(extra)))
        amap = order.align_map(p.variables)

    def order_key(item):
        exps, _ = item
        return order.key(tuple(exps[i] if i >= 0 else 0 for i in amap))

    parts = []
    for exps, coef in sorted(p.terms.items(), key=order_key, reverse=True):
        mono = "*".join(
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(p.variables, exps)
            if e
        )
        if not mono:
            piece = scalar_str(coef)
        elif coef == GR_ONE:
            piece = mono
        elif coef == -GR_ONE:
            piece = "-" + mono
        else:
            piece = scalar_str(coef) + "*" + mono
        if parts and not piece.startswith("-"):
            parts.append("+" + piece)
        else:
            parts.append(piece)
    return "".join(parts)


# -- parsing -----------------------------------------------------------------


class PolyParseError(ValueError):
    pass


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()/":
            tokens.append((ch, ch))
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            tokens.append(("num", text[i:j]))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            name = text[i:j]
            tokens.append(("i", name) if name == "i" else ("name", name))
            i = j
            continue
        raise PolyParseError(f"unexpected character {ch!r} in {text!r}")
    tokens.append(("end", ""))
    return tokens


class _Parser:
    """Recursive-descent parser shared by the polynomial and coefficient grammars.

    Atom hook lets the time-expression grammar claim 't', 'cos' and 'sin'.
    """

    def __init__(self, tokens, atom_hook=None):
        self.tokens = tokens
        self.pos = 0
        self.atom_hook = atom_hook

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.take()
        if tok[0] != kind:
            raise PolyParseError(f"expected {kind!r}, got {tok[1]!r}")
        return tok

    def parse_expr(self):
        sign = 1
        kind, _ = self.peek()
        if kind in "+-":
            self.take()
            sign = -1 if kind == "-" else 1
        value = self.parse_term()
        if sign < 0:
            value = -value
        while True:
            kind, _ = self.peek()
            if kind == "+":
                self.take()
                value = value + self.parse_term()
            elif kind == "-":
                self.take()
                value = value - self.parse_term()
            else:
                return value

    def parse_term(self):
        value = self.parse_factor()
        while True:
            kind, _ = self.peek()
            if kind == "*":
                self.take()
                value = value * self.parse_factor()
            elif kind in ("name", "num", "i", "("):
                # implicit multiplication: 2t, 3a, 2i
                value = value * self.parse_factor()
            else:
                return value

    def parse_factor(self):
        base = self.parse_atom()
        if self.peek()[0] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "-":
                self.take()
                sign = -1
            tok = self.expect("num")
            if "." in tok[1]:
                raise PolyParseError("exponent must be an integer")
            power = sign * int(tok[1])
            if power < 0:
                raise PolyParseError("negative exponents are not supported")
            base = base ** power
        return base

    def parse_atom(self):
        kind, val = self.peek()
        if kind == "(":
            self.take()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if kind == "num":
            self.take()
            q = rat_from_decimal(val)
            if self.peek()[0] == "/":
                self.take()
                tok = self.expect("num")
                q = q / rat_from_decimal(tok[1])
            return self.make_scalar(GaussianRational(q))
        if kind == "i":
            self.take()
            return self.make_scalar(GaussianRational(RAT_ZERO, RAT_ONE))
        if kind == "name":
            if self.atom_hook is not None:
                hooked = self.atom_hook(self, val)
                if hooked is not None:
                    return hooked
            self.take()
            return self.make_name(val)
        raise PolyParseError(f"unexpected token {val!r}")

    # overridable in the coefficient grammar
    def make_scalar(self, scalar: GaussianRational):
        return ParamPoly.constant(scalar)

    def make_name(self, name: str):
        if name == PI_NAME:
            return ParamPoly((PI_NAME,), {(1,): GR_ONE}, _checked=True)
        if name in RESERVED_NAMES:
            raise PolyParseError(f"{name!r} is reserved in the polynomial grammar")
        return ParamPoly.variable(name)


def parse_poly(text: str) -> ParamPoly:
    """Parse the textual polynomial grammar: signed terms, '^' powers, 'i' literal."""
    parser = _Parser(_tokenize(text))
    value = parser.parse_expr()
    if parser.peek()[0] != "end":
        raise PolyParseError(f"trailing input near {parser.peek()[1]!r}")
    if not isinstance(value, ParamPoly):
        value = ParamPoly.constant(value)
    return value


# -- helpers used by the ideal engine ----------------------------------------


def split_pi_unit(p: ParamPoly):
    """Write p as pi^j * q with q free of pi, when a single pi-power occurs.

    Returns (j, q).  Raises ValueError when powers of pi mix: mixed powers
    would turn a single vanishing condition into several, which is outside
    this engine's contract.
    """
    if PI_NAME not in p.variables:
        return 0, p
    idx = p.variables.index(PI_NAME)
    powers = {e[idx] for e in p.terms}
    if not powers:
        return 0, p.compact()
    if len(powers) > 1:
        raise ValueError(
            "mixed powers of pi in obstruction; cannot strip a single positive unit"
        )
    j = powers.pop()
    rest_vars = tuple(v for v in p.variables if v != PI_NAME)
    terms = {
        tuple(e for i, e in enumerate(exps) if i != idx): c for exps, c in p.terms.items()
    }
    return j, ParamPoly(rest_vars, terms, _checked=True)
