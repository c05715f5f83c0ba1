"""Faber polynomials of a hauptmodul: the monic phi_m with phi_m(J) = q^-m + O(q)."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import InsufficientTruncation
from .etaq import HauptmodulId, hauptmodul_series
from .series import QExpansion, mul

DEFAULT_TRUNC = 12


@dataclass(frozen=True)
class FaberPolynomial:
    hid: HauptmodulId
    m: int
    # ascending: coeffs[k] multiplies X^k; coeffs[m] == 1
    coeffs: tuple[Fraction, ...]
    expansion: QExpansion

    def __call__(self, x):
        """Horner evaluation; works for Fractions, ints and mpmath numbers alike."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if c.denominator != 1 else int(c))
        return acc

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def describe(self) -> str:
        terms = []
        for k in range(self.m, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            if k and c == 1:
                terms.append(mono)
            elif k and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")


@functools.lru_cache(maxsize=64)
def _faber(hid: HauptmodulId, m: int, trunc: Fraction) -> FaberPolynomial:
    J = hauptmodul_series(hid, trunc + m)
    powers = [QExpansion.one(trunc + m + 1)]
    for _ in range(m):
        powers.append(mul(powers[-1], J))
    F = powers[m]
    coeffs = [Fraction(0)] * (m + 1)
    coeffs[m] = Fraction(1)
    # powers[k] = q^-k + ..., so the system is unitriangular: clear q^-m+1 .. q^0
    for e in range(-m + 1, 1):
        k = -e
        c = F.coeff(e)
        if c:
            F = F - powers[k].scale(c)
            coeffs[k] -= c
    F = F.truncate(trunc)
    if F.trunc <= 1:
        raise InsufficientTruncation(f"cannot certify phi_{m} = q^-{m} + O(q) below q^{F.trunc}")
    for e, c in F.items():
        if e <= 0 and e != -m:
            raise InsufficientTruncation(f"residual term {c} q^{e} in phi_{m}")
    return FaberPolynomial(hid, m, tuple(coeffs), F)


def faber(hid: HauptmodulId, m: int, trunc=DEFAULT_TRUNC) -> FaberPolynomial:
    if m < 1:
        raise ValueError("Faber polynomials are indexed by m >= 1")
    return _faber(hid, m, Fraction(trunc))


def trace_function(N: int, m: int = 2, trunc=DEFAULT_TRUNC) -> FaberPolynomial:
    """phi_m of the Fricke-group hauptmodul j_N^* (j itself when N = 1)."""
    return faber(HauptmodulId(N, starred=N != 1), m, trunc)
