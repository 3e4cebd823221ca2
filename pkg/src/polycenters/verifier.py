"""Independent floating-point oracle for the displacement map.

Two integrators live here:

* ``flow`` - a scalar adaptive Dormand-Prince 5(4) in complex double
  precision with PI step control, blow-up detection against an escape radius
  (declared only together with outward radial velocity, so a large excursion
  that could still return is not miscalled), and step-underflow handling.
  Coefficients may be compiled algebra terms or arbitrary callables, which is
  how tan/sec coefficient families are handled.

* ``TaylorFlow`` - a batch Taylor-series integrator in double-double complex
  arithmetic (roughly 31 digits).  The displacement sampler needs it: the
  n-th Taylor coefficient estimate multiplies endpoint errors by rho^(-n),
  which for rho = 1e-2 and n = 10 is a factor 1e20.  Double precision cannot
  survive that; double-double with a tight series tolerance can.  Series
  coefficients of the right-hand side are rebuilt each step from exact
  rational coefficient data through mpmath, so the only error sources are the
  truncated series (controlled) and the double-double representation itself.

Taylor-coefficient extraction follows the Cauchy integral: sample the
displacement q(c) = z(omega, c) - c on the circle |c| = rho, take discrete
Fourier modes, rescale by rho^(-n).  Estimates carry a noise floor and a
radius-halving cross-check; ``estimate_multiplicity`` refuses to read tea
leaves below the floor.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath
import numpy as np

from . import _dd
from .rationals import GaussianRational, rat_to_fraction
from .timealgebra import PeriodSpec
from .variational import EquationSpec

# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


class ProfileError(RuntimeError):
    """Displacement sampling failed (blow-up or non-convergence)."""


@dataclass
class FlowResult:
    """Endpoint of one trajectory, or its blow-up record."""

    endpoint: complex | None
    blowup_time: float | None = None
    error_estimate: float = 0.0
    steps: int = 0

    @property
    def blew_up(self) -> bool:
        return self.blowup_time is not None


class NumericEquation:
    """A concrete equation compiled for numeric integration.

    Coefficients are lists of (j, k, value) meaning value * t^j * e^{ikt},
    plus optional callables t -> complex for coefficients outside the
    algebra.  Exact rational term values are kept when available so the
    high-precision integrator loses nothing at setup.
    """

    def __init__(self, degree: int, omega: float, terms: dict[int, list], callables: dict[int, object] | None = None, period: PeriodSpec | None = None):
        self.degree = degree
        self.omega = float(omega)
        self.period = period
        self.terms = {int(k): list(v) for k, v in terms.items()}
        self.callables = dict(callables or {})
        self._float_terms = {
            k: [
                (j, kk, v.to_complex() if isinstance(v, GaussianRational) else complex(v))
                for (j, kk, v) in tl
            ]
            for k, tl in self.terms.items()
        }

    @staticmethod
    def from_equation(eq: EquationSpec, params: dict | None = None) -> "NumericEquation":
        bound = eq.bind(params or {}) if (params or eq.params) else eq
        terms = {}
        for k, coeff in bound.coeffs.items():
            terms[k] = coeff.exact_terms({})
        return NumericEquation(
            eq.degree, bound.period.omega_float, terms, period=bound.period
        )

    @staticmethod
    def from_callables(degree: int, omega: float, coeff_fns: dict[int, object]) -> "NumericEquation":
        return NumericEquation(degree, omega, {}, callables=coeff_fns)

    def coeff_value(self, k: int, t: float) -> complex:
        total = 0j
        for j, kk, v in self._float_terms.get(k, ()):
            term = v
            if j:
                term *= t ** j
            if kk:
                term *= cmath.exp(1j * kk * t)
            total += term
        fn = self.callables.get(k)
        if fn is not None:
            total += complex(fn(t))
        return total

    def rhs(self, t: float, z: complex) -> complex:
        # Horner over the full degree range
        total = 0j
        for k in range(self.degree, 0, -1):
            c = self.coeff_value(k, t) if (k in self._float_terms or k in self.callables) else 0j
            total = total * z + c
        return total * z


def _integrate(fun, y0: np.ndarray, t1: float, rtol: float, atol: float, escape: float | None, outward=None):
    """Adaptive DP5(4) over [0, t1] for a complex vector state.

    Returns (y, None, err, steps) or (None, t_blow, err, steps) on blow-up.
    """
    t = 0.0
    y = np.array(y0, dtype=complex)
    h = t1 / 100.0
    err_acc = 0.0
    steps = 0
    k1 = fun(t, y)
    prev_scaled = 1.0
    while t < t1:
        h = min(h, t1 - t)
        if h < 1e-15 * t1:
            return None, t, err_acc, steps
        ks = [k1]
        for stage in range(1, 7):
            ts = t + _DP_C[stage] * h
            ys = y + h * sum(a * k for a, k in zip(_DP_A[stage], ks))
            ks.append(fun(ts, ys))
        y5 = y + h * sum(b * k for b, k in zip(_DP_B5, ks))
        y4 = y + h * sum(b * k for b, k in zip(_DP_B4, ks))
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
        err = float(np.max(np.abs(y5 - y4) / scale)) + 1e-300
        if err <= 1.0:
            t += h
            y = y5
            k1 = ks[6]  # FSAL
            err_acc += float(np.max(np.abs(y5 - y4)))
            steps += 1
            if escape is not None and float(np.max(np.abs(y))) > escape:
                grow = outward(t, y) if outward is not None else True
                if grow:
                    return None, t, err_acc, steps
            # PI controller
            fac = 0.9 * err ** -0.14 * prev_scaled ** 0.08
            prev_scaled = err
            h *= min(5.0, max(0.2, fac))
        else:
            h *= min(1.0, max(0.2, 0.9 * err ** -0.2))
        if steps > 10_000_000:
            raise ProfileError("integrator exceeded step budget")
    return y, None, err_acc, steps


def flow(eq: NumericEquation | EquationSpec, c: complex, rtol: float = 1e-12, atol: float = 1e-14, escape: float = 1e6) -> FlowResult:
    """Integrate one trajectory from z(0) = c over a period.

    Blow-up is declared when |z| passes the escape radius while still moving
    outward along the ray; near-singular step collapse reports the current
    time as the blow-up time.
    """
    if isinstance(eq, EquationSpec):
        eq = NumericEquation.from_equation(eq)

    def fun(t, y):
        return np.array([eq.rhs(t, complex(y[0]))])

    def outward(t, y):
        z = complex(y[0])
        if z == 0:
            return False
        return (z.conjugate() * eq.rhs(t, z)).real > 0

    y, t_blow, err, steps = _integrate(
        fun, np.array([c], dtype=complex), eq.omega, rtol, atol, escape, outward
    )
    if y is None:
        return FlowResult(None, blowup_time=t_blow, error_estimate=err, steps=steps)
    return FlowResult(complex(y[0]), error_estimate=err, steps=steps)


# -- batch Taylor-series integrator in double-double --------------------------------


class TaylorFlow:
    """Flow map for a batch of trajectories of one or more equations.

    State shape is (n_equations, n_samples).  All equations share the time
    grid; the step size is the most conservative over the batch.
    """

    def __init__(self, eqs: list[NumericEquation], order: int = 24, tol: float = 1e-34, escape: float = 1e6):
        if not eqs:
            raise ValueError("no equations")
        self.eqs = eqs
        self.degree = max(e.degree for e in eqs)
        self.order = order
        self.tol = tol
        self.escape = escape
        mpmath.mp.dps = 60
        self._exact_terms = []
        for e in eqs:
            if e.callables:
                raise ValueError("Taylor flow needs algebra coefficients, not callables")
            per_k = {}
            for k, tl in e.terms.items():
                conv = []
                for (j, kk, v) in tl:
                    if isinstance(v, GaussianRational):
                        re = rat_to_fraction(v.re)
                        im = rat_to_fraction(v.im)
                        val = mpmath.mpc(
                            mpmath.mpf(re.numerator) / mpmath.mpf(re.denominator),
                            mpmath.mpf(im.numerator) / mpmath.mpf(im.denominator),
                        )
                    else:
                        val = mpmath.mpc(v)
                    conv.append((j, kk, val))
                per_k[k] = conv
            self._exact_terms.append(per_k)

    def _alphas(self, t0):
        """Series coefficients of each A_k about t0, per equation.

        Returns {k: (stacked cdd arrays of shape (orders, n_eq, 1), orders-1)}.
        """
        P = self.order
        neq = len(self.eqs)
        ks = sorted({k for per in self._exact_terms for k in per})
        freqs = sorted({kk for per in self._exact_terms for tl in per.values() for (_j, kk, _v) in tl})
        exps = {kk: mpmath.exp(1j * kk * t0) for kk in freqs}
        maxj = max((j for per in self._exact_terms for tl in per.values() for (j, _kk, _v) in tl), default=0)
        t0pows = [mpmath.mpf(1)]
        for _ in range(maxj):
            t0pows.append(t0pows[-1] * t0)
        zero = mpmath.mpc(0)
        out = {}
        for k in ks:
            rows = [[zero] * (P + 1) for _ in range(neq)]
            top = 0
            for ei, per in enumerate(self._exact_terms):
                row = rows[ei]
                for (j, kk, v) in per.get(k, ()):
                    base0 = v * exps[kk]
                    cut = 1e-48 * (abs(base0) + 1.0)
                    if kk == 0:
                        for m1 in range(0, j + 1):
                            row[m1] += base0 * comb(j, m1) * t0pows[j - m1]
                        top = max(top, j)
                        continue
                    ikf = mpmath.mpc(0, kk)
                    ikpow = mpmath.mpc(1)
                    factm = mpmath.mpf(1)
                    for m2 in range(P + 1):
                        if m2:
                            ikpow *= ikf
                            factm *= m2
                        base = base0 * ikpow / factm
                        if abs(base) < cut and m2 > j:
                            break
                        for m1 in range(0, min(j, P - m2) + 1):
                            row[m1 + m2] += base * comb(j, m1) * t0pows[j - m1]
                        top = max(top, min(P, m2 + j))
            orders = top + 1
            rh = np.zeros((orders, neq, 1)); rl = np.zeros((orders, neq, 1))
            ih = np.zeros((orders, neq, 1)); il = np.zeros((orders, neq, 1))
            for ei in range(neq):
                row = rows[ei]
                for m in range(orders):
                    val = row[m]
                    if val is zero:
                        continue
                    re = val.real
                    hi = float(re)
                    rh[m, ei, 0] = hi
                    rl[m, ei, 0] = float(re - hi)
                    im = val.imag
                    hi = float(im)
                    ih[m, ei, 0] = hi
                    il[m, ei, 0] = float(im - hi)
            out[k] = ([rh, rl, ih, il], top)
        return out

    def run(self, z0, omega_mpf):
        """Advance the batch from t = 0 to omega; returns the final cdd state."""
        z = z0
        t0 = mpmath.mpf(0)
        omega_f = float(omega_mpf)
        hmax = max(omega_f / 6.0, 1e-3)
        guard = 0
        while float(t0) < omega_f * (1 - 1e-18):
            guard += 1
            if guard > 10_000:
                raise ProfileError("Taylor flow: step count exploded")
            series = self._series(z, t0)
            h = self._step_size(series, hmax)
            rem = omega_mpf - t0
            if h >= float(rem):
                h_mpf = rem
            else:
                h_mpf = mpmath.mpf(h)
            z = self._horner(series, h_mpf)
            t0 = t0 + h_mpf
            if float(np.max(_dd.cdd_abs_est(z))) > self.escape:
                raise ProfileError("trajectory escaped: reduce rho")
        return z

    def _series(self, z, t0):
        """Taylor coefficients Z_0..Z_P of the local solution, stacked per power.

        Convolutions run vectorized over the order axis with a pairwise
        double-double reduction, which is where the batch speed comes from.
        """
        P = self.order
        alphas = self._alphas(t0)
        neq, nsamp = z[0][0].shape
        kmax = max(alphas) if alphas else 1

        def alloc():
            return [np.zeros((P + 1, neq, nsamp)) for _ in range(4)]

        stacks = {1: alloc()}
        for k in range(2, kmax + 1):
            stacks[k] = alloc()
        st1 = stacks[1]
        st1[0][0], st1[1][0] = z[0][0], z[0][1]
        st1[2][0], st1[3][0] = z[1][0], z[1][1]

        def view(st, sl):
            return ((st[0][sl], st[1][sl]), (st[2][sl], st[3][sl]))

        def setrow(st, p, val):
            st[0][p], st[1][p] = val[0][0], val[0][1]
            st[2][p], st[3][p] = val[1][0], val[1][1]

        for p in range(P):
            for k in range(2, kmax + 1):
                fwd = view(stacks[1], slice(0, p + 1))
                rev_stop = None  # rows p, p-1, ..., 0
                rev = view(stacks[k - 1], slice(p, rev_stop, -1))
                prod = _dd.cdd_mul(fwd, rev)
                setrow(stacks[k], p, _dd.cdd_sum_axis0(prod))
            f_p = None
            for k, (astack, top) in alphas.items():
                lim = min(p, top)
                a = view(astack, slice(0, lim + 1))
                stop = p - lim - 1
                b = view(stacks[k], slice(p, stop if stop >= 0 else None, -1))
                contrib = _dd.cdd_sum_axis0(_dd.cdd_mul(a, b))
                f_p = contrib if f_p is None else _dd.cdd_add(f_p, contrib)
            if f_p is None:
                break
            inv = _dd.dd_from_rational(1, p + 1)
            setrow(stacks[1], p + 1, _dd.cdd_scale_dd(f_p, inv))
        return [view(stacks[1], p) for p in range(P + 1)]

    def _step_size(self, Z, hmax):
        tol = self.tol
        h = hmax
        for p in range(max(2, self.order - 3), self.order + 1):
            m = float(np.max(_dd.cdd_abs_est(Z[p]))) if p < len(Z) else 0.0
            if m > 0:
                h = min(h, 0.8 * (tol / m) ** (1.0 / p))
        return max(h, 1e-6)

    @staticmethod
    def _horner(Z, h_mpf):
        h = _dd.cdd_from_mpc(mpmath.mpc(h_mpf), mpmath)
        hr = h[0]
        acc = Z[-1]
        for p in range(len(Z) - 2, -1, -1):
            acc = _dd.cdd_add(_dd.cdd_scale_dd(acc, hr), Z[p])
        return acc


# -- displacement profile -------------------------------------------------------------


@dataclass
class DisplacementProfile:
    """Taylor-coefficient estimates of the displacement map from circle samples."""

    radius: float
    samples: int
    n_max: int
    d_hat: list[complex]                  # index n-1 holds the order-n estimate
    noise_floor: list[float]
    max_q: float
    precision: str
    radius_check: list[float] | None = None   # |d_hat(rho) - d_hat(rho/2)| per order
    converged: bool = False
    q_samples: list[complex] | None = None    # q(c_s) on the primary circle

    def order_estimate(self, n: int) -> complex:
        return self.d_hat[n - 1]

    def significant(self, n: int) -> bool:
        value = self.d_hat[n - 1] - (1.0 if n == 1 else 0.0)
        return abs(value) > 10.0 * self.noise_floor[n - 1]


def _profile_once(eqs: list[NumericEquation], rho: float, m: int, n_max: int, escape: float, order: int):
    mpmath.mp.dps = 60
    rho_mpf = mpmath.mpf(Fraction(rho).numerator) / mpmath.mpf(Fraction(rho).denominator)
    neq = len(eqs)
    re_hi = np.empty((neq, m)); re_lo = np.empty((neq, m))
    im_hi = np.empty((neq, m)); im_lo = np.empty((neq, m))
    cs = []
    for s in range(m):
        c = rho_mpf * mpmath.exp(2j * mpmath.pi * s / m)
        cs.append(c)
        cdd = _dd.cdd_from_mpc(c, mpmath)
        re_hi[:, s] = cdd[0][0]; re_lo[:, s] = cdd[0][1]
        im_hi[:, s] = cdd[1][0]; im_lo[:, s] = cdd[1][1]
    z0 = ((re_hi, re_lo), (im_hi, im_lo))
    omega_mpf = _omega_mpf(eqs[0])
    tf = TaylorFlow(eqs, order=order, escape=escape)
    z1 = tf.run(z0, omega_mpf)
    q = _dd.cdd_sub(z1, z0)
    max_q = float(np.max(_dd.cdd_abs_est(q)))
    # Fourier modes in double-double; weights are shared across the batch
    roots = [_dd.cdd_from_mpc(mpmath.exp(-2j * mpmath.pi * s / m), mpmath) for s in range(m)]
    weights = []
    for n in range(1, n_max + 1):
        weights.append([roots[(n * s) % m] for s in range(m)])
    out = []
    for ei in range(neq):
        d_hat = []
        for n in range(1, n_max + 1):
            wn = weights[n - 1]
            acc_re = _dd.dd(0.0); acc_im = _dd.dd(0.0)
            for s in range(m):
                qs = ((q[0][0][ei, s], q[0][1][ei, s]),
                      (q[1][0][ei, s], q[1][1][ei, s]))
                prod = _dd.cdd_mul(qs, wn[s])
                acc_re = _dd.dd_add(acc_re, prod[0])
                acc_im = _dd.dd_add(acc_im, prod[1])
            mode = complex(float(acc_re[0] + acc_re[1]), float(acc_im[0] + acc_im[1])) / m
            value = mode * rho ** (-n)
            if n == 1:
                value = 1.0 + value
            d_hat.append(value)
        out.append(d_hat)
    q_c = _dd.cdd_to_complex(q)
    return out, max_q, [q_c[ei, :].tolist() for ei in range(neq)]


def _omega_mpf(eq: NumericEquation):
    if eq.period is not None:
        val = rat_to_fraction(eq.period.value)
        base = mpmath.mpf(val.numerator) / mpmath.mpf(val.denominator)
        if eq.period.kind == "pi_multiple":
            return base * mpmath.pi
        return base
    return mpmath.mpf(eq.omega)


_DD_EPS = 5e-32


def displacement_profile(
    eq: NumericEquation | EquationSpec,
    rho: float = 1e-2,
    m: int = 64,
    n_max: int = 12,
    check_radius: bool = True,
    escape: float = 1e6,
    order: int = 24,
) -> DisplacementProfile:
    """Estimate d_n(omega) for n <= n_max from m circle samples at radius rho.

    Requires m >= 2*n_max + 2.  Raises ProfileError when a sampled trajectory
    blows up (reduce rho).  The noise floor reflects the double-double
    arithmetic and the rho^(-n) amplification; the radius-halving check
    stores how much each estimate moves when rho is halved.
    """
    if m < 2 * n_max + 2:
        raise ValueError("need m >= 2*n_max + 2 samples")
    if isinstance(eq, EquationSpec):
        eq = NumericEquation.from_equation(eq)
    (d_hat,), max_q, (q_samples,) = _profile_once([eq], rho, m, n_max, escape, order)
    floor = _noise_floor(rho, max_q, n_max)
    profile = DisplacementProfile(
        radius=rho, samples=m, n_max=n_max, d_hat=d_hat,
        noise_floor=floor, max_q=max_q, precision="dd", q_samples=q_samples,
    )
    if check_radius:
        (d_half,), max_q2, _ = _profile_once([eq], rho / 2, m, n_max, escape, order)
        floor2 = _noise_floor(rho / 2, max_q2, n_max)
        deltas = [abs(d_hat[n - 1] - d_half[n - 1]) for n in range(1, n_max + 1)]
        profile.radius_check = deltas
        ok = True
        for n in range(1, n_max + 1):
            signal = abs(d_hat[n - 1] - (1.0 if n == 1 else 0.0))
            combined = 10.0 * (floor[n - 1] + floor2[n - 1])
            if signal <= 10.0 * floor[n - 1]:
                continue  # below the floor on the wider circle: nothing to converge
            if deltas[n - 1] > max(combined, 1e-6 * signal):
                ok = False
        profile.converged = ok
    return profile


def _noise_floor(rho: float, max_q: float, n_max: int) -> list[float]:
    # representation noise of the double-double samples (scale |z| ~ rho)
    # dominates the series truncation; the rho^(-n) rescale amplifies it
    eps_abs = 10.0 * _DD_EPS * max(rho, max_q)
    return [eps_abs * rho ** (-n) + 1e-200 for n in range(1, n_max + 1)]


def estimate_multiplicity(profile: DisplacementProfile):
    """Smallest order standing clear of the noise floor, or a center-consistent verdict."""
    if profile.radius_check is None:
        raise ValueError("profile was built without the radius-halving check")
    if not profile.converged:
        raise ValueError("profile failed the radius-halving convergence check")
    if abs(profile.d_hat[0] - 1.0) > 10.0 * profile.noise_floor[0]:
        return 1
    for n in range(2, profile.n_max + 1):
        if abs(profile.d_hat[n - 1]) > 10.0 * profile.noise_floor[n - 1]:
            return n
    return f"center-consistent up to {profile.n_max}"


def verify_center(
    eq: NumericEquation | EquationSpec,
    rho: float = 1e-2,
    count: int = 20,
    tol_factor: float = 1e-6,
    rtol: float = 1e-12,
) -> tuple[bool, dict]:
    """Integrate `count` starts on |c| = rho; center-consistent iff all return.

    True iff max |z(omega, c) - c| <= tol_factor * rho.  Blow-up of any start
    is an immediate False with diagnostics.
    """
    if isinstance(eq, EquationSpec):
        eq = NumericEquation.from_equation(eq)
    worst = 0.0
    worst_c = None
    for s in range(count):
        c = rho * cmath.exp(2j * cmath.pi * s / count)
        res = flow(eq, c, rtol=rtol)
        if res.blew_up:
            return False, {
                "blowup": True,
                "c": repr(c),
                "blowup_time": res.blowup_time,
            }
        dev = abs(res.endpoint - c)
        if dev > worst:
            worst, worst_c = dev, c
    return worst <= tol_factor * rho, {
        "blowup": False,
        "max_deviation": worst,
        "bound": tol_factor * rho,
        "worst_c": repr(worst_c),
        "count": count,
    }


def theorem_a_escape_radius(N: int, gamma: float, omega: float, alpha: float) -> float:
    """Radius beyond which trajectories on an invariant ray cannot return."""
    denom = (N - 1) * gamma * omega * math.cos((N - 1) * alpha)
    if denom <= 0:
        raise ValueError("needs gamma*cos((N-1)*alpha) > 0")
    return (2.0 / denom) ** (1.0 / (N - 1))
