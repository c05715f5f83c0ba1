"""Numerical values of eta quotients and hauptmoduln at CM points.

Everything here is floating point (mpmath); exact answers come back through
:func:`rational_round`, which refuses to guess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import _kernels
from .errors import NotUpperHalfPlane, ReconstructionFailure
from .etaq import HauptmodulId, level2_quotient, recipe
from .faber import faber
from .quadforms import CMPoint, heegner_point

__all__ = [
    "PrecisionContext",
    "CMPoint",
    "heegner_point",
    "cm_value",
    "eta_value",
    "hauptmodul_value",
    "faber_value",
    "rational_round",
]


@dataclass(frozen=True)
class PrecisionContext:
    bits: int = 256
    guard_bits: int = 64
    max_den: int = 12

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("working precision must be at least 64 bits")

    @property
    def wp(self) -> int:
        return self.bits + self.guard_bits

    @property
    def tol(self) -> mpmath.mpf:
        return mpmath.mpf(2) ** (-(self.bits // 2))

    def eta_terms(self, y) -> int:
        """Smallest K with |q|^(K(3K-1)/2) below 2^-(bits+guard) for Im tau = y."""
        y = float(y)
        if not y > 0:
            raise NotUpperHalfPlane(f"Im tau = {y} is not positive")
        need = self.wp * math.log(2) / (2 * math.pi * y)
        # K(3K-1)/2 >= need
        K = math.ceil((1 + math.sqrt(1 + 24 * need)) / 6)
        while K * (3 * K - 1) / 2 < need:
            K += 1
        return K + 1

    def doubled(self) -> "PrecisionContext":
        return PrecisionContext(2 * self.bits, 2 * self.guard_bits, self.max_den)


DEFAULT_CONTEXT = PrecisionContext()


def cm_value(tau, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpmath.mpc:
    """Complex value of a CMPoint (or pass through anything mpmath accepts)."""
    with mpmath.workprec(ctx.wp):
        if isinstance(tau, CMPoint):
            return mpmath.mpc(tau.minus_b, mpmath.sqrt(tau.d)) / tau.two_a
        return mpmath.mpc(tau)


def eta_value(tau, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpmath.mpc:
    """Dedekind eta via the pentagonal series."""
    with mpmath.workprec(ctx.wp):
        t = cm_value(tau, ctx)
        if t.imag <= 0:
            raise NotUpperHalfPlane(f"Im tau = {t.imag} is not positive")
        K = ctx.eta_terms(t.imag)
        two_pi_i_tau = 2j * mpmath.pi * t
        q = mpmath.exp(two_pi_i_tau)
        s = _kernels.pentagonal_sum(q, K, ctx.wp)
        return mpmath.exp(two_pi_i_tau / 24) * s


def _scaled_etas(t: mpmath.mpc, scales, ctx) -> dict[int, mpmath.mpc]:
    return {s: eta_value(s * t, ctx) for s in scales}


def hauptmodul_value(hid: HauptmodulId, tau, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpmath.mpc:
    """j_N or j_N^* at tau, from its eta-quotient formula (j itself for N = 1)."""
    with mpmath.workprec(ctx.wp):
        t = cm_value(tau, ctx)
        if hid.level == 1:
            # j = (x + 256)^3 / x^2 with x = (eta(tau)/eta(2 tau))^24
            quo = level2_quotient()
            etas = _scaled_etas(t, [s for s, _ in quo.factors], ctx)
            x = mpmath.fprod(etas[s] ** r for s, r in quo.factors)
            return (x + 256) ** 3 / x**2
        r = recipe(hid)
        scales = sorted({s for _, quo in r.terms for s, _ in quo.factors})
        etas = _scaled_etas(t, scales, ctx)
        total = mpmath.mpc(r.constant.numerator) / r.constant.denominator
        for c, quo in r.terms:
            v = mpmath.fprod(etas[s] ** e for s, e in quo.factors)
            total += mpmath.mpf(c.numerator) / c.denominator * v
        return total


def faber_value(hid: HauptmodulId, m: int, tau, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpmath.mpc:
    phi = faber(hid, m)
    with mpmath.workprec(ctx.wp):
        x = hauptmodul_value(hid, tau, ctx)
        acc = mpmath.mpc(0)
        for c in reversed(phi.coeffs):
            acc = acc * x + mpmath.mpf(c.numerator) / c.denominator
        return acc


def _exact(x: mpmath.mpf) -> Fraction:
    sign, man, exp, _ = x._mpf_
    if not man and exp:
        raise ReconstructionFailure(f"cannot round a non-finite value {x}", x)
    man = -man if sign else man
    return Fraction(man) * Fraction(2) ** exp if exp >= 0 else Fraction(man, 2**-exp)


def rational_round(x, max_den: int = 12, tol=None, d=None) -> Fraction:
    """Nearest rational with denominator <= max_den, or ReconstructionFailure.

    The binary value of ``x`` is used exactly, so the answer does not depend on
    the ambient mpmath precision.  Ties in distance go to the smaller
    denominator; ``tol`` defaults to 2^-64.
    """
    if max_den < 1:
        raise ValueError("max_den must be positive")
    tol = Fraction(2) ** -64 if tol is None else _exact(mpmath.mpf(tol))
    if isinstance(x, mpmath.mpc):
        if abs(_exact(x.imag)) > tol:
            raise ReconstructionFailure(f"imaginary part {mpmath.nstr(x.imag, 5)} exceeds tolerance", x, d)
        x = x.real
    elif isinstance(x, complex):
        if abs(x.imag) > tol:
            raise ReconstructionFailure(f"imaginary part {x.imag:.3g} exceeds tolerance", x, d)
        x = x.real
    # no mpf(x) round trip: that would re-round to the ambient precision
    xf = _exact(x) if isinstance(x, mpmath.mpf) else Fraction(x) if not isinstance(x, str) else _exact(mpmath.mpf(x))
    best = None
    for den in range(1, max_den + 1):
        cand = Fraction(round(xf * den), den)
        err = abs(xf - cand)
        if best is None or err < best[0]:
            best = (err, cand)
    err, cand = best
    if err > tol:
        raise ReconstructionFailure(
            f"{mpmath.nstr(x, 25)} is not within {float(tol):.3g} of a rational with denominator <= {max_den}"
            + (f" (d={d})" if d is not None else ""),
            x,
            d,
        )
    return cand
