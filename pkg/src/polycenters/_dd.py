"""Double-double complex arithmetic over numpy arrays.

A double-double number is an unevaluated sum hi + lo of two float64 values
with |lo| <= ulp(hi)/2, giving roughly 31 significant decimal digits.  That
is what the displacement-map sampler needs: extracting the n-th Taylor
coefficient from values on a circle of radius 1e-2 multiplies absolute errors
by 10^(2n), so plain float64 drowns everything past n ~ 5.

Real double-doubles are (hi, lo) pairs of equal-shape arrays; complex ones
are (re, im) pairs of real pairs.  Only the operations the Taylor-series
integrator needs are implemented.  Dekker splitting stands in for FMA, which
numpy does not expose; magnitudes here are far from the overflow threshold
where splitting breaks.
"""

from __future__ import annotations

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _quick_two_sum(a, b):
    s = a + b
    err = b - (s - a)
    return s, err


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


# -- real double-double: (hi, lo) ------------------------------------------------


def dd(hi, lo=0.0):
    return (np.asarray(hi, dtype=float), np.asarray(lo, dtype=float))


def dd_add(a, b):
    s, e = _two_sum(a[0], b[0])
    e = e + a[1] + b[1]
    return _quick_two_sum(s, e)


def dd_neg(a):
    return (-a[0], -a[1])


def dd_sub(a, b):
    return dd_add(a, dd_neg(b))


def dd_mul(a, b):
    p, e = _two_prod(a[0], b[0])
    e = e + (a[0] * b[1] + a[1] * b[0])
    return _quick_two_sum(p, e)


def dd_abs_est(a):
    return np.abs(a[0])


# -- complex double-double: (re_pair, im_pair) -------------------------------------


def cdd(re_hi=0.0, re_lo=0.0, im_hi=0.0, im_lo=0.0):
    return (dd(re_hi, re_lo), dd(im_hi, im_lo))


def cdd_zeros(shape):
    z = np.zeros(shape)
    return ((z.copy(), z.copy()), (z.copy(), z.copy()))


def cdd_from_mpc(x, mp):
    """Scalar complex double-double from an mpmath mpc (or mpf)."""
    re = mp.mpf(x.real) if hasattr(x, "real") else mp.mpf(x)
    im = mp.mpf(x.imag) if hasattr(x, "imag") else mp.mpf(0)
    re_hi = float(re)
    re_lo = float(re - mp.mpf(re_hi))
    im_hi = float(im)
    im_lo = float(im - mp.mpf(im_hi))
    return cdd(re_hi, re_lo, im_hi, im_lo)


def cdd_add(a, b):
    return (dd_add(a[0], b[0]), dd_add(a[1], b[1]))


def cdd_sub(a, b):
    return (dd_sub(a[0], b[0]), dd_sub(a[1], b[1]))


def cdd_neg(a):
    return (dd_neg(a[0]), dd_neg(a[1]))


def cdd_mul(a, b):
    ar, ai = a
    br, bi = b
    re = dd_sub(dd_mul(ar, br), dd_mul(ai, bi))
    im = dd_add(dd_mul(ar, bi), dd_mul(ai, br))
    return (re, im)


def cdd_scale_dd(a, s):
    """Multiply by a real double-double scalar."""
    return (dd_mul(a[0], s), dd_mul(a[1], s))


def cdd_abs_est(a) -> np.ndarray:
    return np.hypot(a[0][0], a[1][0])


def cdd_sum_axis0(a):
    """Sum a complex double-double array along its leading axis.

    Pairwise tree reduction with double-double adds at every level; a plain
    np.sum over hi parts would throw away exactly the low-order bits this
    representation exists to keep.
    """
    rr, ii = a
    rh, rl = rr
    ih, il = ii
    while rh.shape[0] > 1:
        n = rh.shape[0]
        half = n // 2
        lead_r = dd_add((rh[:half], rl[:half]), (rh[half:2 * half], rl[half:2 * half]))
        lead_i = dd_add((ih[:half], il[:half]), (ih[half:2 * half], il[half:2 * half]))
        if n % 2:
            rh = np.concatenate([lead_r[0], rh[-1:]])
            rl = np.concatenate([lead_r[1], rl[-1:]])
            ih = np.concatenate([lead_i[0], ih[-1:]])
            il = np.concatenate([lead_i[1], il[-1:]])
        else:
            (rh, rl), (ih, il) = lead_r, lead_i
    return ((rh[0], rl[0]), (ih[0], il[0]))


def cdd_to_complex(a) -> np.ndarray:
    return (a[0][0] + a[0][1]) + 1j * (a[1][0] + a[1][1])


def dd_from_rational(num: int, den: int):
    """Exact-to-31-digits real double-double of a rational number."""
    from fractions import Fraction

    f = Fraction(num, den)
    hi = f.numerator / f.denominator if abs(f.numerator) < 2 ** 970 else float(f)
    rem = f - Fraction(hi)
    lo = rem.numerator / rem.denominator if rem else 0.0
    return dd(hi, lo)
