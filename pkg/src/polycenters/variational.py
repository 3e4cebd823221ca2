"""Variational coefficients of the displacement map by recursive integration.

For  dz/dt = sum_k A_k(t) z^k  write the solution with z(0) = c as
z(t, c) = sum_n d_n(t) c^n,  d_1(0) = 1,  d_n(0) = 0 for n > 1.  Matching
powers of c gives

    d/dt d_n = sum_k A_k(t) * S_{k,n}(t),
    S_{k,n}  = sum over compositions j_1 + ... + j_k = n (parts >= 1)
               of d_{j_1} ... d_{j_k},

which solves by integration from 0 level by level, since S_{k,n} with k >= 2
involves only d_m with m < n.  The convolution powers S are memoized
bottom-up; they are the expensive objects for the degree-4 classes.

A linear coefficient A_1 is supported symbolically when it is a constant c
with e^{c omega} = 1 that keeps e^{ct} inside the algebra: c = i*k with
integer k and omega an integer multiple of 2*pi (or c = 0 for rational
periods).  Then d_1 = e^{ct} and the integrating factor folds in exactly:
d_n = e^{ct} * integrate0(e^{-ct} * R_n).  Anything else is the numeric
verifier's job.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .parampoly import PI_NAME, ParamPoly, RESERVED_NAMES
from .rationals import RAT_ZERO
from .timealgebra import PeriodSpec, TimeExpr


class LinearTermError(ValueError):
    """Raised when A_1 cannot be folded into the symbolic algebra."""


@dataclass(frozen=True)
class ParamSpec:
    name: str
    domain: str = "real"

    def __post_init__(self):
        if self.domain not in ("real", "complex"):
            raise ValueError(f"parameter domain must be real or complex, got {self.domain!r}")
        if self.name in RESERVED_NAMES or self.name == PI_NAME:
            raise ValueError(f"parameter name {self.name!r} is reserved")


@dataclass
class EquationSpec:
    """A scalar equation dz/dt = sum_{k=1}^{N} A_k(t) z^k with exact coefficients."""

    degree: int
    period: PeriodSpec
    coeffs: dict[int, TimeExpr]
    params: tuple[ParamSpec, ...] = ()
    label: str = ""
    sources: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 2:
            raise ValueError("degree must be at least 2")
        self.coeffs = {
            int(k): v for k, v in self.coeffs.items() if not v.is_zero
        }
        for k in self.coeffs:
            if not 1 <= k <= self.degree:
                raise ValueError(f"coefficient index {k} outside 1..{self.degree}")
        top = self.coeffs.get(self.degree)
        if top is None or top.is_zero:
            raise ValueError("leading coefficient A_N must be present and nonzero")
        declared = [p.name for p in self.params]
        if len(set(declared)) != len(declared):
            raise ValueError("duplicate parameter names")
        used = set()
        for v in self.coeffs.values():
            used.update(v.variables)
        undeclared = sorted(used - set(declared))
        if undeclared:
            self.params = tuple(self.params) + tuple(
                ParamSpec(name) for name in undeclared
            )
        else:
            self.params = tuple(self.params)

    # -- queries -------------------------------------------------------------

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def real_params(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params if p.domain == "real")

    def coeff(self, k: int) -> TimeExpr:
        return self.coeffs.get(k, TimeExpr.zero())

    def is_concrete(self) -> bool:
        return all(not c.variables for c in self.coeffs.values())

    def linear_mode(self):
        """('zero', None) or ('constant', integer k) with A_1 = i*k; raises otherwise."""
        a1 = self.coeffs.get(1)
        if a1 is None or a1.is_zero:
            return "zero", None
        try:
            const = a1.constant_poly()
        except ValueError:
            raise LinearTermError(
                "linear term outside symbolic algebra; use numeric verifier"
            ) from None
        if not const.is_constant:
            raise LinearTermError(
                "linear term outside symbolic algebra; use numeric verifier"
            )
        c = const.constant_value()
        if c.re != RAT_ZERO or c.im.denominator != 1:
            raise LinearTermError(
                "linear term outside symbolic algebra; use numeric verifier"
            )
        k = int(c.im.numerator)
        if self.period.full_turns() is None:
            raise LinearTermError(
                "linear term outside symbolic algebra; use numeric verifier"
            )
        return "constant", k

    # -- transforms ------------------------------------------------------------

    def substitute(self, name: str, replacement: ParamPoly) -> "EquationSpec":
        coeffs = {k: v.substitute(name, replacement) for k, v in self.coeffs.items()}
        params = tuple(p for p in self.params if p.name != name)
        return EquationSpec(
            degree=self.degree,
            period=self.period,
            coeffs=coeffs,
            params=params,
            label=self.label,
            sources=dict(self.sources),
        )

    def bind(self, values: dict) -> "EquationSpec":
        """Produce a concrete (parameter-free) equation by exact substitution."""
        missing = [p.name for p in self.params if p.name not in values]
        if missing:
            raise KeyError(f"unbound parameters {missing}")
        coeffs = {k: v.bind({n: values[n] for n in v.variables}) for k, v in self.coeffs.items()}
        return EquationSpec(
            degree=self.degree,
            period=self.period,
            coeffs=coeffs,
            params=(),
            label=self.label,
            sources=dict(self.sources),
        )


class VariationalEngine:
    """Memoized computation of d_n(t) and the convolution powers for one equation."""

    def __init__(self, eq: EquationSpec):
        self.eq = eq
        self.mode, self.linear_k = eq.linear_mode()
        self._d: dict[int, TimeExpr] = {}
        self._pw: dict[tuple[int, int], TimeExpr] = {}
        if self.mode == "zero":
            self._d[1] = TimeExpr.constant(1)
        else:
            self._d[1] = TimeExpr.exp_t(self.linear_k)

    def d(self, n: int) -> TimeExpr:
        if n < 1:
            raise ValueError("n must be >= 1")
        for m in range(2, n + 1):
            if m not in self._d:
                self._d[m] = self._compute_d(m)
        return self._d[n]

    def coefficients(self, nmax: int) -> list[TimeExpr]:
        return [self.d(n) for n in range(1, nmax + 1)]

    def _power(self, k: int, m: int) -> TimeExpr:
        """Coefficient of c^m in z^k, i.e. S_{k,m}."""
        if k == 1:
            return self._d[m]
        if m < k:
            return TimeExpr.zero()
        key = (k, m)
        cached = self._pw.get(key)
        if cached is not None:
            return cached
        total = TimeExpr.zero()
        for i in range(1, m - k + 2):
            left = self._d[i]
            right = self._power(k - 1, m - i)
            if left.is_zero or right.is_zero:
                continue
            total = total + left * right
        self._pw[key] = total
        return total

    def _compute_d(self, n: int) -> TimeExpr:
        rhs = TimeExpr.zero()
        for k in sorted(self.eq.coeffs):
            if k == 1:
                continue
            coeff = self.eq.coeffs[k]
            s_kn = self._power(k, n)
            if s_kn.is_zero:
                continue
            rhs = rhs + coeff * s_kn
        if self.mode == "zero":
            return rhs.integrate0()
        damp = TimeExpr.exp_t(-self.linear_k)
        grow = TimeExpr.exp_t(self.linear_k)
        return grow * (damp * rhs).integrate0()


def variational_coeffs(eq: EquationSpec, nmax: int) -> list[TimeExpr]:
    """d_1 .. d_nmax with d_1(0) = 1 and d_n(0) = 0 for n > 1."""
    if nmax < 2:
        raise ValueError("nmax must be >= 2")
    return VariationalEngine(eq).coefficients(nmax)


# -- three-term machinery ----------------------------------------------------------


def theoremB_lambdas(
    A: TimeExpr,
    B: TimeExpr,
    C: TimeExpr,
    L: int,
    M: int,
    N: int,
    period: PeriodSpec,
):
    """The three obstructions for dz/dt = A z^N + B z^M + C z^L, 1 < L < M < N = L+M-1.

    lambda_1 = integral of C, lambda_2 = integral of B,
    lambda_3 = integral of [A + (M-L) * B * Ctilde].  Multiplicity is L, M or N
    according to the first nonzero lambda; a center forces all three to vanish.
    """
    if not (1 < L < M < N):
        raise ValueError("need 1 < L < M < N")
    if N != L + M - 1:
        raise ValueError("N != L+M-1: three-term criterion inapplicable")
    lam1 = C.integrate0().eval_at_omega(period)
    lam2 = B.integrate0().eval_at_omega(period)
    inner = A + (B * C.integrate0()) * (M - L)
    lam3 = inner.integrate0().eval_at_omega(period)
    return lam1, lam2, lam3


def theoremB_verdict(lam1: ParamPoly, lam2: ParamPoly, lam3: ParamPoly, L: int, M: int, N: int):
    """Multiplicity from the lambda values of a concrete three-term equation.

    Returns (multiplicity, which) where which names the deciding quantity, or
    (None, 'undetermined') when all three vanish.
    """
    if not lam1.is_zero:
        return L, "lambda1"
    if not lam2.is_zero:
        return M, "lambda2"
    if not lam3.is_zero:
        return N, "lambda3"
    return None, "undetermined"


def corollaryB_transform(
    A: TimeExpr,
    B: TimeExpr,
    C: TimeExpr,
    D: TimeExpr,
    L: int,
    M: int,
    N: int,
    period: PeriodSpec,
):
    """Remove the linear term of dz/dt = A z^N + B z^M + C z^L + D z exactly.

    Derivation: w = e^{-int_0^t D} z turns the equation into
    dw/dt = A1 w^N + B1 w^M + C1 w^L with A1 = e^{(N-1) int D} A,
    B1 = e^{(M-1) int D} B, C1 = e^{(L-1) int D} C.  Initial conditions and
    multiplicities of periodic solutions are unchanged.  Needs D constant
    with e^{D omega} = 1 representable in the algebra (D = i*k, whole turns).
    """
    if not (1 < L < M < N and N == L + M - 1):
        raise ValueError("need 1 < L < M < N = L+M-1")
    if D.is_zero:
        return A, B, C
    try:
        const = D.constant_poly()
        c = const.constant_value()
    except ValueError:
        raise LinearTermError(
            "transform needs a constant linear coefficient; use the numeric verifier"
        ) from None
    if not const.is_constant or c.re != RAT_ZERO or c.im.denominator != 1:
        raise LinearTermError(
            "transform needs D = i*k with integer k; use the numeric verifier"
        )
    if period.full_turns() is None:
        raise LinearTermError(
            "transform needs omega to be a whole number of turns; use the numeric verifier"
        )
    k = int(c.im.numerator)
    A1 = TimeExpr.exp_t((N - 1) * k) * A
    B1 = TimeExpr.exp_t((M - 1) * k) * B
    C1 = TimeExpr.exp_t((L - 1) * k) * C
    return A1, B1, C1
