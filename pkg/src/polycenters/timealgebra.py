"""The function algebra for equation coefficients and variational coefficients.

A ``TimeExpr`` is a finite sum of terms  c * t^j * e^{i k t}  with j >= 0,
integer frequency k, and ``ParamPoly`` coefficients c.  The algebra is closed
under products and under integration from 0: integrating a nonzero-mean
trigonometric term produces a secular t term, which is why t-powers and
frequencies may mix in one expression.

Storage is a single flat dict  (j, k, exponent-tuple) -> GaussianRational
together with a shared sorted variable tuple; the nested view
{(j, k): ParamPoly} is materialized on demand.  The flat layout keeps the
product convolution (the hot path of the variational recursion) close to the
metal.

Real trigonometric input in cos/sin form converts losslessly to the
exponential basis over Q(i):  cos nt = (E_n + E_{-n})/2,
sin nt = (E_n - E_{-n})/(2i).  Real-valuedness for real parameters is exactly
conjugate symmetry of the coefficients under k -> -k.

Periods are exact: a rational number (polynomial classes) or a rational
multiple of pi (trigonometric classes).  Evaluation of a trigonometric
expression is supported at integer multiples of 2*pi, where e^{ik omega} = 1;
anything else would leave Q(i) and raises.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .parampoly import (
    GR_ONE,
    MonomialOrder,
    PI_NAME,
    ParamPoly,
    PolyParseError,
    _Parser,
    _as_poly,
    _tokenize,
    poly_to_string,
)
from .rationals import GaussianRational, RAT, RAT_ONE, RAT_ZERO, rat_str

# GR_ONE is re-exported via parampoly; keep local aliases short.
_I = GaussianRational(0, 1)
_HALF = GaussianRational(RAT(1, 2))
_MINUS_HALF_I = GaussianRational(RAT_ZERO, RAT(-1, 2))


@dataclass(frozen=True)
class PeriodSpec:
    """Exact period: ``rational`` (value = omega) or ``pi_multiple`` (omega = value*pi)."""

    kind: str
    value: object  # exact rational

    def __post_init__(self):
        if self.kind not in ("rational", "pi_multiple"):
            raise ValueError(f"unknown period kind {self.kind!r}")
        object.__setattr__(self, "value", RAT(self.value))
        if not self.value > 0:
            raise ValueError("omega must be positive")

    @staticmethod
    def rational(value) -> "PeriodSpec":
        return PeriodSpec("rational", RAT(value))

    @staticmethod
    def pi_multiple(value) -> "PeriodSpec":
        return PeriodSpec("pi_multiple", RAT(value))

    @staticmethod
    def two_pi() -> "PeriodSpec":
        return PeriodSpec("pi_multiple", RAT(2))

    @property
    def omega_float(self) -> float:
        if self.kind == "rational":
            return float(self.value)
        return float(self.value) * cmath.pi

    def full_turns(self):
        """omega / (2*pi) when that is an exact integer, else None."""
        if self.kind != "pi_multiple":
            return None
        half = self.value / 2
        if half.denominator == 1:
            return int(half.numerator)
        return None

    def to_json(self) -> dict:
        return {self.kind: rat_str(self.value)}

    @staticmethod
    def from_json(obj: dict) -> "PeriodSpec":
        if len(obj) != 1:
            raise ValueError("period object must have exactly one key")
        (kind, raw), = obj.items()
        from .rationals import rat_from_decimal

        return PeriodSpec(kind, rat_from_decimal(str(raw)))

    def __str__(self):
        if self.kind == "rational":
            return rat_str(self.value)
        return f"{rat_str(self.value)}*pi"


class TimeExpr:
    """Immutable element of the t^j * e^{ikt} algebra with ParamPoly coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables=(), terms=None, _checked=False):
        variables = tuple(variables)
        if terms is None:
            terms = {}
        if not _checked:
            if list(variables) != sorted(variables):
                raise ValueError("variables must be sorted")
            if PI_NAME in variables:
                raise ValueError("'pi' may not be a TimeExpr parameter")
            nvars = len(variables)
            clean = {}
            for (j, k, exps), coef in terms.items():
                if j < 0:
                    raise ValueError("negative t power")
                if len(exps) != nvars:
                    raise ValueError("exponent vector length mismatch")
                if not isinstance(coef, GaussianRational):
                    coef = GaussianRational(coef)
                if coef:
                    clean[(j, k, tuple(exps))] = coef
            terms = clean
        self.variables = variables
        self.terms = terms

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "TimeExpr":
        return _T_ZERO

    @staticmethod
    def constant(value) -> "TimeExpr":
        poly = _as_poly(value)
        if poly is NotImplemented:
            raise TypeError(f"cannot make TimeExpr constant from {value!r}")
        return TimeExpr.from_poly(poly)

    @staticmethod
    def from_poly(poly: ParamPoly) -> "TimeExpr":
        poly = poly.compact()
        terms = {(0, 0, exps): c for exps, c in poly.terms.items()}
        return TimeExpr(poly.variables, terms, _checked=True)

    @staticmethod
    def t_power(j: int) -> "TimeExpr":
        return TimeExpr((), {(j, 0, ()): GR_ONE}, _checked=True)

    @staticmethod
    def exp_t(k: int, coef=GR_ONE) -> "TimeExpr":
        """coef * e^{ikt}"""
        if not isinstance(coef, GaussianRational):
            coef = GaussianRational(coef)
        return TimeExpr((), {(0, int(k), ()): coef}, _checked=True)

    @staticmethod
    def cos_t(n: int = 1) -> "TimeExpr":
        return TimeExpr((), {(0, n, ()): _HALF, (0, -n, ()): _HALF}, _checked=True)

    @staticmethod
    def sin_t(n: int = 1) -> "TimeExpr":
        return TimeExpr(
            (), {(0, n, ()): _MINUS_HALF_I, (0, -n, ()): -_MINUS_HALF_I}, _checked=True
        )

    # -- structure ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_trig(self) -> bool:
        return any(k for (_, k, _) in self.terms)

    def coefficient_map(self) -> dict[tuple[int, int], ParamPoly]:
        """Nested view: (j, k) -> ParamPoly coefficient."""
        grouped: dict[tuple[int, int], dict] = {}
        for (j, k, exps), coef in self.terms.items():
            grouped.setdefault((j, k), {})[exps] = coef
        return {
            jk: ParamPoly(self.variables, tdict, _checked=True)
            for jk, tdict in sorted(grouped.items())
        }

    def constant_poly(self) -> ParamPoly:
        """The coefficient ParamPoly when the expression is constant in t."""
        for (j, k, _e) in self.terms:
            if j or k:
                raise ValueError("TimeExpr is not constant in t")
        terms = {exps: c for (_, _, exps), c in self.terms.items()}
        return ParamPoly(self.variables, terms, _checked=True).compact()

    def with_variables(self, variables) -> "TimeExpr":
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {name: i for i, name in enumerate(variables)}
        missing = [v for v in self.variables if v not in pos]
        if missing:
            raise ValueError(f"target variables missing {missing}")
        n = len(variables)
        terms = {}
        for (j, k, exps), coef in self.terms.items():
            out = [0] * n
            for v, e in zip(self.variables, exps):
                out[pos[v]] = e
            terms[(j, k, tuple(out))] = coef
        return TimeExpr(variables, terms, _checked=True)

    def _aligned(self, other: "TimeExpr"):
        if self.variables == other.variables:
            return self, other
        merged = tuple(sorted(set(self.variables) | set(other.variables)))
        return self.with_variables(merged), other.with_variables(merged)

    # -- ring operations --------------------------------------------------------

    def __add__(self, other):
        other = _as_texpr(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._aligned(other)
        terms = dict(a.terms)
        for key, coef in b.terms.items():
            cur = terms.get(key)
            if cur is None:
                terms[key] = coef
            else:
                s = cur + coef
                if s:
                    terms[key] = s
                else:
                    del terms[key]
        return TimeExpr(a.variables, terms, _checked=True)

    __radd__ = __add__

    def __neg__(self):
        return TimeExpr(
            self.variables, {key: -c for key, c in self.terms.items()}, _checked=True
        )

    def __sub__(self, other):
        other = _as_texpr(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (GaussianRational, int)):
            return self.scale(other)
        other = _as_texpr(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._aligned(other)
        terms: dict = {}
        bt = list(b.terms.items())
        for (j1, k1, e1), c1 in a.terms.items():
            for (j2, k2, e2), c2 in bt:
                key = (j1 + j2, k1 + k2, tuple(x + y for x, y in zip(e1, e2)))
                prod = c1 * c2
                cur = terms.get(key)
                if cur is None:
                    terms[key] = prod
                else:
                    s = cur + prod
                    if s:
                        terms[key] = s
                    else:
                        del terms[key]
        return TimeExpr(a.variables, terms, _checked=True)

    __rmul__ = __mul__

    def scale(self, scalar) -> "TimeExpr":
        if isinstance(scalar, ParamPoly):
            return self * TimeExpr.from_poly(scalar)
        if not isinstance(scalar, GaussianRational):
            scalar = GaussianRational(scalar)
        if not scalar:
            return _T_ZERO
        return TimeExpr(
            self.variables,
            {key: c * scalar for key, c in self.terms.items()},
            _checked=True,
        )

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = TimeExpr.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = _as_texpr(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- calculus -----------------------------------------------------------------

    def integrate0(self) -> "TimeExpr":
        """The antiderivative F with F(0) = 0 and F' = self.

        t^j integrates to t^{j+1}/(j+1); t^j e^{ikt} with k != 0 by repeated
        integration by parts, subtracting the value at 0.
        """
        terms: dict = {}

        def bump(key, coef):
            if not coef:
                return
            cur = terms.get(key)
            if cur is None:
                terms[key] = coef
            else:
                s = cur + coef
                if s:
                    terms[key] = s
                else:
                    del terms[key]

        for (j, k, exps), coef in self.terms.items():
            if k == 0:
                bump((j + 1, 0, exps), coef * GaussianRational(RAT(1, j + 1)))
                continue
            inv_ik = GaussianRational(RAT_ZERO, RAT(-1, k))  # 1/(ik)
            # G(t) = e^{ikt} * sum_{m=0}^{j} (-1)^m j!/(j-m)! t^{j-m} / (ik)^{m+1}
            factor = inv_ik
            falling = 1
            for m in range(j + 1):
                if m:
                    falling *= j - m + 1
                    factor = factor * inv_ik
                sign = -1 if m % 2 else 1
                bump((j - m, k, exps), coef * factor * (sign * falling))
            # subtract G(0): only the m = j term has t^0
            sign = -1 if j % 2 else 1
            g0 = coef * factor * (sign * falling)
            bump((0, 0, exps), -g0)
        return TimeExpr(self.variables, terms, _checked=True)

    def differentiate(self) -> "TimeExpr":
        terms: dict = {}

        def bump(key, coef):
            if not coef:
                return
            cur = terms.get(key)
            if cur is None:
                terms[key] = coef
            else:
                s = cur + coef
                if s:
                    terms[key] = s
                else:
                    del terms[key]

        for (j, k, exps), coef in self.terms.items():
            if j:
                bump((j - 1, k, exps), coef * j)
            if k:
                bump((j, k, exps), coef * GaussianRational(RAT_ZERO, RAT(k)))
        return TimeExpr(self.variables, terms, _checked=True)

    # -- evaluation ------------------------------------------------------------------

    def eval_at_omega(self, period: PeriodSpec) -> ParamPoly:
        """Exact value at t = omega as a ParamPoly (with 'pi' for pi-multiple periods)."""
        if self.is_trig:
            turns = period.full_turns()
            if turns is None:
                raise ValueError(
                    "irrational evaluation unsupported: trigonometric terms need "
                    "omega to be an integer multiple of 2*pi"
                )
        out_vars = self.variables
        max_j = max((j for (j, _k, _e) in self.terms), default=0)
        use_pi = period.kind == "pi_multiple" and max_j > 0
        if use_pi:
            out_vars = tuple(sorted(set(out_vars) | {PI_NAME}))
        pi_idx = out_vars.index(PI_NAME) if use_pi else -1
        pos = {name: i for i, name in enumerate(out_vars)}
        n = len(out_vars)
        acc: dict = {}
        for (j, k, exps), coef in self.terms.items():
            # e^{ik omega} = 1 at full turns (k may be nonzero only then)
            if period.kind == "rational":
                scale = coef * (period.value ** j if j else RAT_ONE)
                pi_pow = 0
            else:
                scale = coef * (period.value ** j if j else RAT_ONE)
                pi_pow = j
            out = [0] * n
            for v, e in zip(self.variables, exps):
                out[pos[v]] = e
            if pi_pow:
                out[pi_idx] = pi_pow
            key = tuple(out)
            cur = acc.get(key)
            if cur is None:
                acc[key] = scale
            else:
                s = cur + scale
                if s:
                    acc[key] = s
                else:
                    del acc[key]
        return ParamPoly(out_vars, acc, _checked=True).compact()

    def eval_numeric(self, t: float, params: dict[str, complex] | None = None) -> complex:
        """Floating evaluation at time t with every parameter bound."""
        params = params or {}
        for v in self.variables:
            if v not in params:
                raise KeyError(f"unbound parameter {v!r}")
        vals = [complex(params[v]) for v in self.variables]
        total = 0j
        for (j, k, exps), coef in self.terms.items():
            term = coef.to_complex()
            for val, e in zip(vals, exps):
                if e:
                    term *= val ** e
            if j:
                term *= t ** j
            if k:
                term *= cmath.exp(1j * k * t)
            total += term
        return total

    def numeric_terms(self, params: dict[str, complex] | None = None):
        """Collapse parameters: list of (j, k, complex coefficient), merged."""
        params = params or {}
        acc: dict[tuple[int, int], complex] = {}
        for (j, k, exps), coef in self.terms.items():
            value = coef.to_complex()
            for v, e in zip(self.variables, exps):
                if e:
                    value *= complex(params[v]) ** e
            acc[(j, k)] = acc.get((j, k), 0j) + value
        return [(j, k, v) for (j, k), v in sorted(acc.items()) if v != 0]

    def exact_terms(self, params: dict[str, GaussianRational]):
        """Collapse parameters exactly: list of (j, k, GaussianRational)."""
        acc: dict[tuple[int, int], GaussianRational] = {}
        for (j, k, exps), coef in self.terms.items():
            value = coef
            for v, e in zip(self.variables, exps):
                if e:
                    val = params[v]
                    if not isinstance(val, GaussianRational):
                        val = GaussianRational(val)
                    value = value * (val ** e)
            cur = acc.get((j, k))
            acc[(j, k)] = value if cur is None else cur + value
        return [(j, k, v) for (j, k), v in sorted(acc.items()) if v]

    def bind(self, params: dict) -> "TimeExpr":
        """Substitute exact values for parameters, producing a parameter-free TimeExpr."""
        gr = {
            name: val if isinstance(val, GaussianRational) else GaussianRational(val)
            for name, val in params.items()
        }
        terms = {}
        for (j, k, exps), coef in self.terms.items():
            value = coef
            for v, e in zip(self.variables, exps):
                if e:
                    value = value * (gr[v] ** e)
            key = (j, k, ())
            cur = terms.get(key)
            if cur is None:
                if value:
                    terms[key] = value
            else:
                s = cur + value
                if s:
                    terms[key] = s
                else:
                    del terms[key]
        return TimeExpr((), terms, _checked=True)

    def substitute(self, name: str, replacement: ParamPoly) -> "TimeExpr":
        """Substitute a ParamPoly for one parameter in every coefficient."""
        if name not in self.variables:
            return self
        out = _T_ZERO
        for (j, k), poly in self.coefficient_map().items():
            out = out + TimeExpr.from_poly(poly.substitute(name, replacement)) * TimeExpr(
                (), {(j, k, ()): GR_ONE}, _checked=True
            )
        return out

    def conj_reflect(self) -> "TimeExpr":
        """Map k -> -k and conjugate scalars: the complex conjugate for real t and real params."""
        return TimeExpr(
            self.variables,
            {(j, -k, exps): c.conjugate() for (j, k, exps), c in self.terms.items()},
            _checked=True,
        )

    def real_imag_parts(self) -> tuple["TimeExpr", "TimeExpr"]:
        """Split f = u + i v with u, v real-valued for real t and real parameters."""
        conj = self.conj_reflect()
        u = (self + conj).scale(_HALF)
        v = (self - conj).scale(_MINUS_HALF_I)
        return u, v

    @property
    def is_real_valued(self) -> bool:
        return self == self.conj_reflect()

    # -- text ---------------------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (j, k), poly in self.coefficient_map().items():
            s = poly_to_string(poly)
            factor = []
            if j:
                factor.append("t" if j == 1 else f"t^{j}")
            if k:
                factor.append(f"e^({k}it)" if k != 1 else "e^(it)")
            if not factor:
                piece = s
            else:
                base = "*".join(factor)
                piece = base if s == "1" else (f"({s})*" + base if ("+" in s[1:] or "-" in s[1:]) else f"{s}*{base}")
            parts.append(piece)
        return " + ".join(parts)

    def __repr__(self):
        return f"TimeExpr({str(self)!r})"


_T_ZERO = TimeExpr((), {}, _checked=True)


def _as_texpr(value):
    if isinstance(value, TimeExpr):
        return value
    poly = _as_poly(value)
    if poly is NotImplemented:
        return NotImplemented
    return TimeExpr.from_poly(poly)


# -- spec-level operation aliases ------------------------------------------------------


def texpr_mul(f: TimeExpr, g: TimeExpr) -> TimeExpr:
    return f * g


def integrate0(f: TimeExpr) -> TimeExpr:
    return f.integrate0()


def eval_at_omega(f: TimeExpr, period: PeriodSpec) -> ParamPoly:
    return f.eval_at_omega(period)


def eval_numeric(f: TimeExpr, t: float, params=None) -> complex:
    return f.eval_numeric(t, params)


# -- the coefficient grammar -----------------------------------------------------------


class _CoefficientParser(_Parser):
    """Parser for equation-file coefficients: 'poly t: ...' and 'trig: ...' bodies."""

    def __init__(self, tokens, mode: str):
        super().__init__(tokens, atom_hook=self._hook)
        self.mode = mode

    def _hook(self, parser, name):
        if name == "t":
            if self.mode != "poly":
                raise PolyParseError("'t' is only valid after a 'poly t:' prefix")
            self.take()
            return TimeExpr.t_power(1)
        if name in ("cos", "sin"):
            if self.mode != "trig":
                raise PolyParseError(f"{name}(t) is only valid after a 'trig:' prefix")
            self.take()
            self.expect("(")
            tok = self.take()
            if tok != ("name", "t"):
                raise PolyParseError("only cos(t) and sin(t) are supported")
            self.expect(")")
            return TimeExpr.cos_t() if name == "cos" else TimeExpr.sin_t()
        return None


def parse_coefficient(text: str) -> TimeExpr:
    """Parse the coefficient grammar.

    Forms: 'poly t: 1 + 2t + 3t^2', 'trig: a*cos(t) + b*sin(t)^2', or a bare
    parameter/number expression for constant coefficients.
    """
    text = text.strip()
    if text.startswith("poly t:"):
        mode, body = "poly", text[len("poly t:"):]
    elif text.startswith("poly:"):
        mode, body = "poly", text[len("poly:"):]
    elif text.startswith("trig:"):
        mode, body = "trig", text[len("trig:"):]
    else:
        mode, body = "const", text
    parser = _CoefficientParser(_tokenize(body), mode)
    value = parser.parse_expr()
    if parser.peek()[0] != "end":
        raise PolyParseError(f"trailing input near {parser.peek()[1]!r}")
    return _as_texpr(value)
