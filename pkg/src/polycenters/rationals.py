"""Exact scalar arithmetic: arbitrary-precision rationals and Gaussian rationals.

The rational backend prefers gmpy2's ``mpq`` (markedly faster on the Groebner
and variational workloads) and falls back to ``fractions.Fraction`` when gmpy2
is not installed.  Both are hashable, auto-normalized (positive denominator,
lowest terms) and interoperate with plain ints, so all code goes through the
``RAT`` constructor and never touches the backend directly.

``GaussianRational`` is the coefficient field Q(i): a pair of rationals with
exact complex arithmetic.  The real-only fast paths matter: the polynomial-in-t
coefficient classes never leave the real line, while the trigonometric classes
put factors of 1/2 and 1/(2i) on everything.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq

    def RAT(a=0, b=None):
        """Exact rational from int, backend rational, Fraction or string."""
        if b is not None:
            return _mpq(a, b)
        if isinstance(a, float):
            a = Fraction(a)
        if isinstance(a, Fraction):
            return _mpq(a.numerator, a.denominator)
        return _mpq(a)

    RAT_BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    def RAT(a=0, b=None):
        """Exact rational from int, backend rational, Fraction or string."""
        if b is not None:
            return Fraction(a, b)
        return Fraction(a)

    RAT_BACKEND = "fractions"

RAT_ZERO = RAT(0)
RAT_ONE = RAT(1)


def rat_from_decimal(text: str):
    """Parse '3', '3/4' or '0.25' into an exact rational."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return RAT(int(num), int(den))
    if "." in text or "e" in text or "E" in text:
        return RAT(Fraction(text))
    return RAT(int(text))


def rat_str(q) -> str:
    """Canonical 'p' or 'p/q' rendering."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rat_to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class GaussianRational:
    """Exact element re + im*i of Q(i).

    Denominators are kept positive and in lowest terms by the rational
    backend; equality is exact and no floating point enters this class.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(RAT_ZERO) else RAT(re)
        self.im = im if type(im) is type(RAT_ZERO) else RAT(im)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_complex(z: complex) -> "GaussianRational":
        """Exact image of a Python complex (floats are exact rationals)."""
        return GaussianRational(RAT(Fraction(z.real)), RAT(Fraction(z.imag)))

    # -- predicates --------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return not self.im

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(other.re - self.re, other.im - self.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational(a * c, RAT_ZERO)
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        a, b = self.re, self.im
        if not b:
            return GaussianRational(1 / a, RAT_ZERO)
        n = a * a + b * b
        return GaussianRational(a / n, -b / n)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = GR_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- conversions -------------------------------------------------------

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({rat_str(self.re)}, {rat_str(self.im)})"

    def __str__(self):
        return scalar_str(self)


def _coerce(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, int) or type(value) is type(RAT_ZERO) or isinstance(value, Fraction):
        return GaussianRational(RAT(value), RAT_ZERO)
    if isinstance(value, complex):
        return GaussianRational.from_complex(value)
    return NotImplemented


GR_ZERO = GaussianRational(RAT_ZERO, RAT_ZERO)
GR_ONE = GaussianRational(RAT_ONE, RAT_ZERO)
GR_I = GaussianRational(RAT_ZERO, RAT_ONE)


def scalar_str(c: GaussianRational) -> str:
    """Render a Gaussian rational in the textual polynomial grammar.

    Pure reals print as '3/2', pure imaginaries as '3/2i' (meaning (3/2)*i),
    mixed values as '(1+2i)'.
    """
    if not c.im:
        return rat_str(c.re)
    if not c.re:
        if c.im == RAT_ONE:
            return "i"
        if c.im == -RAT_ONE:
            return "-i"
        return rat_str(c.im) + "i"
    re_s = rat_str(c.re)
    im = c.im
    if im == RAT_ONE:
        im_s = "+i"
    elif im == -RAT_ONE:
        im_s = "-i"
    else:
        im_s = ("+" if im > 0 else "") + rat_str(im) + "i"
    return f"({re_s}{im_s})"
