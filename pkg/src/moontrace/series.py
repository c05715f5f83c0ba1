"""Truncated Laurent series in fractional powers of q with exact rational coefficients.

A :class:`QExpansion` stores coefficients densely on the exponent grid
``offset + i*step`` (``i = 0 .. len(coeffs)-1``); every exponent below ``trunc``
on that grid is known, nothing at or above ``trunc`` is.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import _kernels
from .errors import NonIntegralGrid, ZeroLeadingCoefficient

__all__ = [
    "QExpansion",
    "add",
    "mul",
    "invert",
    "pow_int",
    "q_derivative",
    "U_operator",
    "V_operator",
]

JSON_DEN = 24


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _frac_gcd(x: Fraction, y: Fraction) -> Fraction:
    """Largest rational g with x/g and y/g integers (gcd(0, y) = |y|)."""
    if x == 0:
        return abs(y)
    if y == 0:
        return abs(x)
    den = x.denominator * y.denominator // math.gcd(x.denominator, y.denominator)
    return Fraction(math.gcd(int(x * den), int(y * den)), den)


def _ceil_div(a: Fraction, b: Fraction) -> int:
    return -((-a) // b)


def _as_ints(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    """Scale rational coefficients to integers; returns (ints, common denominator)."""
    den = 1
    for c in coeffs:
        d = c.denominator
        if d != 1:
            den = den * d // math.gcd(den, d)
    if den == 1:
        return [c.numerator for c in coeffs], 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


class QExpansion:
    """Immutable truncated series ``sum_i coeffs[i] q^(offset + i*step) + O(q^trunc)``."""

    __slots__ = ("offset", "step", "coeffs", "trunc")

    def __init__(self, offset, step, coeffs: Iterable, trunc=None):
        offset = _frac(offset)
        step = _frac(step)
        if step <= 0:
            raise ValueError("step must be positive")
        cs = [_frac(c) for c in coeffs]
        if trunc is None:
            trunc = offset + len(cs) * step
        else:
            trunc = _frac(trunc)
            n = _ceil_div(trunc - offset, step)
            if n < 0:
                n = 0
            if n > len(cs):
                raise ValueError("coefficients do not reach the stated truncation")
            cs = cs[:n]
        # strip leading zeros so the leading stored coefficient is nonzero
        k = 0
        while k < len(cs) and cs[k] == 0:
            k += 1
        if k:
            cs = cs[k:]
            offset = offset + k * step
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "step", step)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, name, value):
        raise AttributeError("QExpansion is immutable")

    # constructors ---------------------------------------------------------

    @classmethod
    def from_dict(cls, terms: dict, trunc, step=1) -> "QExpansion":
        """Build from ``{exponent: coefficient}``; absent grid points are zero."""
        trunc = _frac(trunc)
        step = _frac(step)
        if not terms:
            return cls.zero(trunc, step)
        lo = min(_frac(e) for e in terms)
        n = _ceil_div(trunc - lo, step)
        cs = [Fraction(0)] * max(n, 0)
        for e, c in terms.items():
            e = _frac(e)
            if e >= trunc:
                continue
            i = (e - lo) / step
            if i.denominator != 1:
                raise ValueError(f"exponent {e} is off the grid of step {step}")
            cs[int(i)] += _frac(c)
        return cls(lo, step, cs, trunc)

    @classmethod
    def zero(cls, trunc, step=1) -> "QExpansion":
        trunc = _frac(trunc)
        return cls(trunc, step, [], trunc)

    @classmethod
    def one(cls, trunc, step=1) -> "QExpansion":
        return cls.monomial(0, trunc, 1, step)

    @classmethod
    def monomial(cls, exponent, trunc, coeff=1, step=1) -> "QExpansion":
        exponent = _frac(exponent)
        trunc = _frac(trunc)
        if exponent >= trunc:
            return cls.zero(trunc, step)
        return cls.from_dict({exponent: coeff}, trunc, step)

    # basic queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> Fraction:
        """Lowest exponent with a nonzero coefficient (== trunc for the zero series)."""
        return self.offset

    def exponents(self) -> Iterator[Fraction]:
        for i in range(len(self.coeffs)):
            yield self.offset + i * self.step

    def items(self) -> Iterator[tuple[Fraction, Fraction]]:
        """Nonzero (exponent, coefficient) pairs in increasing exponent order."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.offset + i * self.step, c

    def coeff(self, exponent) -> Fraction:
        e = _frac(exponent)
        if e >= self.trunc:
            raise IndexError(f"coefficient of q^{e} is beyond truncation q^{self.trunc}")
        if e < self.offset:
            return Fraction(0)
        i = (e - self.offset) / self.step
        if i.denominator != 1:
            return Fraction(0)
        return self.coeffs[int(i)]

    __getitem__ = coeff

    def is_integral_grid(self) -> bool:
        return all(e.denominator == 1 for e, _ in self.items())

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    # grid handling --------------------------------------------------------

    def regrid(self, step) -> "QExpansion":
        """Same series on a finer grid ``step`` (which must divide the current one)."""
        step = _frac(step)
        if step == self.step:
            return self
        ratio = self.step / step
        if ratio.denominator != 1:
            raise ValueError(f"step {step} does not refine {self.step}")
        r = int(ratio)
        n = len(self.coeffs)
        cs = [Fraction(0)] * (n * r)
        cs[::r] = self.coeffs
        return QExpansion(self.offset, step, cs, self.trunc)

    def canonical(self) -> "QExpansion":
        """Coarsest grid holding every nonzero exponent and the truncation point."""
        g = Fraction(0)
        for e, _ in self.items():
            g = _frac_gcd(g, e - self.offset)
        if g == 0 or g == self.step or g % self.step != 0:
            return self
        r = int(g / self.step)
        return QExpansion(self.offset, g, self.coeffs[::r], self.trunc)

    def truncate(self, trunc) -> "QExpansion":
        trunc = _frac(trunc)
        if trunc >= self.trunc:
            return self
        if trunc <= self.offset:
            return QExpansion.zero(trunc, self.step)
        n = _ceil_div(trunc - self.offset, self.step)
        return QExpansion(self.offset, self.step, self.coeffs[:n], trunc)

    def shift(self, k) -> "QExpansion":
        """Multiply by q^k exactly."""
        k = _frac(k)
        return QExpansion(self.offset + k, self.step, self.coeffs, self.trunc + k)

    def scale(self, c) -> "QExpansion":
        c = _frac(c)
        return QExpansion(self.offset, self.step, [c * x for x in self.coeffs], self.trunc)

    # operators ------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, QExpansion):
            return add(self, other)
        if isinstance(other, (int, Fraction)):
            return add(self, QExpansion.monomial(0, self.trunc, other, self.step))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if isinstance(other, QExpansion):
            return add(self, -other)
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        return pow_int(self, k)

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        if a.trunc != b.trunc:
            return False
        return dict(a.items()) == dict(b.items())

    def __hash__(self):
        return hash((self.trunc, tuple(self.canonical().items())))

    def agrees_with(self, other: "QExpansion", upto=None) -> bool:
        """Coefficientwise equality below ``upto`` (default: the common truncation)."""
        t = min(self.trunc, other.trunc)
        if upto is not None:
            t = min(t, _frac(upto))
        return self.truncate(t) == other.truncate(t)

    def first_difference(self, other: "QExpansion"):
        """Smallest exponent where the two series disagree below the common trunc, or None."""
        t = min(self.trunc, other.trunc)
        exps = {e for e, _ in self.truncate(t).items()} | {e for e, _ in other.truncate(t).items()}
        for e in sorted(exps):
            if self.coeff(e) != other.coeff(e):
                return e
        return None

    def __repr__(self):
        return f"QExpansion({format_series(self, max_terms=6)})"

    # serialization --------------------------------------------------------

    def to_json_obj(self) -> dict:
        den = JSON_DEN
        for x in (self.offset, self.step, self.trunc):
            den = den * x.denominator // math.gcd(den, x.denominator)
        off = self.offset * den
        tr = self.trunc * den
        r = int(self.step * den)
        n = int(tr - off)
        cs = ["0"] * n
        for i, c in enumerate(self.coeffs):
            cs[i * r] = _format_rational(c)
        return {"den": den, "offset": int(off), "trunc": int(tr), "coeffs": cs}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "QExpansion":
        den = int(obj["den"])
        cs = [Fraction(c) for c in obj["coeffs"]]
        s = cls(Fraction(int(obj["offset"]), den), Fraction(1, den), cs, Fraction(int(obj["trunc"]), den))
        return s.canonical()

    @classmethod
    def from_json(cls, text: str) -> "QExpansion":
        return cls.from_json_obj(json.loads(text))


def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_series(s: QExpansion, max_terms: int | None = None) -> str:
    """Human-readable rendering, e.g. ``q^-1 + 744 + 196884*q + O(q^2)``."""
    parts = []
    for e, c in s.items():
        if max_terms is not None and len(parts) >= max_terms:
            parts.append("...")
            break
        cs = _format_rational(c)
        if e == 0:
            parts.append(cs)
            continue
        mono = "q" if e == 1 else f"q^{_format_rational(e)}"
        if c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{cs}*{mono}")
    parts.append(f"O(q^{_format_rational(s.trunc)})")
    return " + ".join(parts).replace("+ -", "- ")


def _common_step(a: QExpansion, b: QExpansion) -> Fraction:
    g = _frac_gcd(a.step, b.step)
    return _frac_gcd(g, a.offset - b.offset)


def add(a: QExpansion, b: QExpansion) -> QExpansion:
    trunc = min(a.trunc, b.trunc)
    step = _common_step(a, b)
    # zero series carry no grid information worth honoring
    if a.is_zero():
        return b.truncate(trunc)
    if b.is_zero():
        return a.truncate(trunc)
    a = a.regrid(step)
    b = b.regrid(step)
    lo = min(a.offset, b.offset)
    n = _ceil_div(trunc - lo, step)
    if n <= 0:
        return QExpansion.zero(trunc, step)
    cs = [Fraction(0)] * n
    for s in (a, b):
        start = int((s.offset - lo) / step)
        for i, c in enumerate(s.coeffs):
            j = start + i
            if j >= n:
                break
            cs[j] += c
    return QExpansion(lo, step, cs, trunc)


def mul(a: QExpansion, b: QExpansion) -> QExpansion:
    """Cauchy product; known below min(a.trunc + b.offset, b.trunc + a.offset)."""
    trunc = min(a.trunc + b.offset, b.trunc + a.offset)
    step = _frac_gcd(a.step, b.step)
    if a.is_zero() or b.is_zero():
        return QExpansion.zero(trunc, step)
    a = a.regrid(step)
    b = b.regrid(step)
    offset = a.offset + b.offset
    n = max(0, _ceil_div(trunc - offset, step))
    ai, ad = _as_ints(a.coeffs)
    bi, bd = _as_ints(b.coeffs)
    prod = _kernels.convolve_trunc(ai, bi, n)
    den = ad * bd
    cs = [Fraction(x, den) for x in prod] if den != 1 else [Fraction(x) for x in prod]
    return QExpansion(offset, step, cs, trunc)


def invert(a: QExpansion) -> QExpansion:
    if a.is_zero():
        raise ZeroLeadingCoefficient("cannot invert a series that is zero up to its truncation")
    n = len(a.coeffs)
    ai, ad = _as_ints(a.coeffs)
    lead = ai[0]
    # e_k = c_k * lead^(k+1) stays integral: e_k = -sum_i ai[i] lead^(i-1) e_(k-i)
    w = [0] * len(ai)
    p = 1
    for i in range(1, len(ai)):
        w[i] = ai[i] * p
        p *= lead
    e = [0] * n
    e[0] = 1
    for k in range(1, n):
        s = 0
        for i in range(1, min(k, len(ai) - 1) + 1):
            if w[i]:
                s += w[i] * e[k - i]
        e[k] = -s
    c = []
    p = lead
    for k in range(n):
        c.append(Fraction(e[k], p))
        p *= lead
    cs = [x * ad for x in c]
    return QExpansion(-a.offset, a.step, cs, a.trunc - 2 * a.offset)


def pow_int(a: QExpansion, k: int) -> QExpansion:
    if k < 0:
        return pow_int(invert(a), -k)
    if k == 0:
        if a.is_zero():
            # 0^0 taken as 1 with no information beyond the constant
            return QExpansion.one(a.step, a.step)
        return QExpansion.one(a.trunc - a.offset, a.step)
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def q_derivative(a: QExpansion) -> QExpansion:
    """q d/dq, i.e. (2 pi i)^-1 d/dtau on q-expansions."""
    cs = [c * e for c, e in zip(a.coeffs, a.exponents())]
    return QExpansion(a.offset, a.step, cs, a.trunc)


def U_operator(a: QExpansion, t: int) -> QExpansion:
    """sum a_n q^n -> sum a_{tn} q^n."""
    if t < 1:
        raise ValueError("U_t needs a positive integer t")
    if not a.is_integral_grid():
        raise NonIntegralGrid("U_t is only defined on integer exponent grids")
    a = a.canonical()
    if a.is_zero():
        return QExpansion.zero(_ceil_div(a.trunc, Fraction(t)), 1)
    lo = _ceil_div(a.offset, Fraction(t))
    hi = _ceil_div(a.trunc, Fraction(t))
    terms = {n: a.coeff(t * n) for n in range(lo, hi)}
    return QExpansion.from_dict(terms, hi, 1)


def V_operator(a: QExpansion, t: int) -> QExpansion:
    """tau -> t*tau: exponents scale by t."""
    if t < 1:
        raise ValueError("V_t needs a positive integer t")
    return QExpansion(a.offset * t, a.step * t, a.coeffs, a.trunc * t)
