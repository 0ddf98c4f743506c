"""Exponential-polynomial waves: e^{lam*z} (optionally e^{lam*z + lam^3*t}) times
a finite Laurent sum in lam with polynomial or shared-denominator coefficients.

This class of functions is closed under the Moutard transform of the free wave,
which is why it carries the whole eigenfunction pipeline.
"""

from __future__ import annotations

import cmath

from .algebra import MPoly, POLE_FLOOR, PowerFrac, RationalFn
from .errors import LambdaZeroError, PoleError, ZeroPolynomial


class WaveFn:
    """e^{lam z} * sum_k lam^{-k} f_k, with integer k of either sign.

    coeffs maps k to f_k (MPoly, or PowerFrac once a denominator has been
    absorbed); negative keys carry positive powers of lam, which derivatives
    produce.  den, when set, is one shared MPoly denominator for every slot.
    """

    __slots__ = ("time_phase", "coeffs", "den")

    def __init__(self, coeffs=None, time_phase: bool = False, den: MPoly = None):
        self.time_phase = time_phase
        self.coeffs = {}
        if coeffs:
            for k, f in coeffs.items():
                if not f.is_zero():
                    self.coeffs[k] = f
        if den is not None and den.is_zero():
            raise ZeroPolynomial("wave denominator is zero")
        self.den = den

    @classmethod
    def free(cls, time_phase: bool = False) -> "WaveFn":
        """The free wave e^{lam z} (or e^{lam z + lam^3 t})."""
        return cls({0: MPoly.const(1)}, time_phase=time_phase)

    def slot(self, k: int):
        f = self.coeffs.get(k)
        if f is not None:
            return f
        return MPoly.zero()

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, WaveFn):
            return NotImplemented
        if self.time_phase != other.time_phase:
            return False
        if (self.den is None) != (other.den is None):
            return False
        if self.den is not None and self.den != other.den:
            return False
        return self.coeffs == other.coeffs

    def __add__(self, other):
        if not isinstance(other, WaveFn):
            return NotImplemented
        if self.time_phase != other.time_phase:
            raise ValueError("cannot add waves with different phases")
        if not _same_den(self.den, other.den):
            raise ValueError("cannot add waves over different denominators")
        out = dict(self.coeffs)
        for k, f in other.coeffs.items():
            s = out.get(k)
            out[k] = f if s is None else s + f
        return WaveFn(out, self.time_phase, self.den)

    def __neg__(self):
        return WaveFn({k: -f for k, f in self.coeffs.items()}, self.time_phase, self.den)

    def __sub__(self, other):
        if not isinstance(other, WaveFn):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "WaveFn":
        """Multiply every coefficient by an MPoly or scalar."""
        return WaveFn({k: f * factor for k, f in self.coeffs.items()}, self.time_phase, self.den)

    def shift(self, dk: int) -> "WaveFn":
        """Multiply by lam^{-dk}."""
        return WaveFn({k + dk: f for k, f in self.coeffs.items()}, self.time_phase, self.den)

    def absorb_denominator(self) -> "WaveFn":
        """Convert to PowerFrac coefficients over the shared denominator."""
        if self.den is None:
            return self
        return WaveFn({k: PowerFrac(f, self.den, 1) for k, f in self.coeffs.items()},
                      self.time_phase, None)

    def map_coeffs(self, fn) -> "WaveFn":
        return WaveFn({k: fn(f) for k, f in self.coeffs.items()}, self.time_phase, self.den)

    def conj_swap_coeffs(self) -> "WaveFn":
        return self.map_coeffs(lambda f: f.conj_swap())

    def __repr__(self):
        phase = "e^{lam z + lam^3 t}" if self.time_phase else "e^{lam z}"
        body = " + ".join(f"lam^{-k}*({f})" for k, f in sorted(self.coeffs.items()))
        den = f" / ({self.den})" if self.den is not None else ""
        return f"WaveFn[{phase} * ({body}){den}]"


def _same_den(a, b):
    if a is None and b is None:
        return True
    if a is None or b is None:
        return False
    return a == b


def wave_diff_z(w: WaveFn) -> WaveFn:
    """d/dz: the phase contributes lam * f at slot k-1, the coefficient its z-derivative."""
    out = {}
    for k, f in w.coeffs.items():
        _acc(out, k - 1, f)
        _acc(out, k, f.diff_z())
    return WaveFn(out, w.time_phase, w.den)


def wave_diff_zbar(w: WaveFn) -> WaveFn:
    return w.map_coeffs(lambda f: f.diff_zbar())


def wave_diff_t(w: WaveFn) -> WaveFn:
    """d/dt; with the time phase set, e^{lam^3 t} contributes lam^3 * f at slot k-3."""
    out = {}
    for k, f in w.coeffs.items():
        _acc(out, k, f.diff_t())
        if w.time_phase:
            _acc(out, k - 3, f)
    return WaveFn(out, w.time_phase, w.den)


def _acc(out, k, f):
    if f.is_zero():
        return
    s = out.get(k)
    out[k] = f if s is None else s + f


def wave_antideriv_z(w: WaveFn) -> WaveFn:
    """Exact z-antiderivative inside the wave class (no integration constant).

    Uses int e^{lam z} z^n dz = e^{lam z} * sum_{j=0..n} (-1)^j n!/(n-j)! z^{n-j} lam^{-(j+1)};
    zb and t ride along.  Coefficients must be plain polynomials.
    """
    out = {}
    for k, f in w.coeffs.items():
        if not isinstance(f, MPoly):
            raise TypeError("wave_antideriv_z needs polynomial coefficients")
        for (n, m, p), c in f.terms.items():
            sign = 1
            fac = 1
            for j in range(n + 1):
                # fac = n!/(n-j)!
                coeff = c * (sign * fac)
                _acc(out, k + j + 1, MPoly.monomial(n - j, m, p, coeff))
                sign = -sign
                fac *= (n - j)
    return WaveFn(out, w.time_phase, w.den)


def wave_antideriv_zbar(w: WaveFn) -> WaveFn:
    """zb-antiderivative; the phase does not involve zb."""
    return w.map_coeffs(lambda f: f.antideriv_zbar())


def wave_mul_rational(w: WaveFn, r: RationalFn) -> WaveFn:
    """Multiply by a rational function, keeping one shared denominator."""
    if r.num.is_zero():
        return WaveFn({}, w.time_phase)
    den = r.den if w.den is None else w.den * r.den
    if den == MPoly.const(1):
        den = None
    return WaveFn({k: f * r.num for k, f in w.coeffs.items()}, w.time_phase, den)


def wave_eval(w: WaveFn, z0: complex, t0: float = 0.0, lam0: complex = 1.0) -> complex:
    """Numeric value including the exponential prefactor."""
    lam0 = complex(lam0)
    if lam0 == 0 and any(k > 0 for k in w.coeffs):
        raise LambdaZeroError("lam = 0 with negative powers of lam present")
    phase = lam0 * complex(z0)
    if w.time_phase:
        phase += lam0 ** 3 * t0
    total = 0.0 + 0.0j
    for k, f in w.coeffs.items():
        if isinstance(f, PowerFrac):
            val = f.to_rational().eval(z0, t0)
        elif isinstance(f, MPoly):
            val = f.eval(z0, t0)
        else:
            val = f.eval(z0, t0)
        total += lam0 ** (-k) * val
    if w.den is not None:
        dv = w.den.eval(z0, t0)
        if abs(dv) < POLE_FLOOR * (1.0 + abs(total)):
            raise PoleError(f"wave denominator ~ 0 at z={z0}, t={t0}")
        total /= dv
    return cmath.exp(phase) * total


def wave_eval_naive(w: WaveFn, z0: complex, t0: float = 0.0, lam0: complex = 1.0) -> complex:
    """Independent straight-line evaluation used by cross-check tests."""
    lam0 = complex(lam0)
    phase = lam0 * complex(z0) + (lam0 ** 3 * t0 if w.time_phase else 0.0)
    total = 0.0 + 0.0j
    for k, f in w.coeffs.items():
        base = f.to_rational() if isinstance(f, PowerFrac) else f
        if isinstance(base, MPoly):
            val = base.eval_naive(z0, t0)
        else:
            val = base.eval(z0, t0)
        total += lam0 ** (-k) * val
    if w.den is not None:
        total /= w.den.eval_naive(z0, t0)
    return cmath.exp(phase) * total
