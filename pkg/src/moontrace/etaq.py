"""Concrete q-expansions: eta quotients, the hauptmoduln, E2^(N), theta, divisor sums."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedLevel
from .series import QExpansion, V_operator, invert, mul, pow_int

SUPPORTED_LEVELS = (1, 2, 3, 5, 6, 7, 10, 13)
PRIME_LEVELS = (2, 3, 5, 7, 13)
COMPOSITE_LEVELS = {6: (2, 3), 10: (2, 5)}


# divisor sums ---------------------------------------------------------------


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError("divisors of a non-positive integer")
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def sigma(k: int, n: int) -> int:
    return sum(d**k for d in divisors(n))


def _as_nonneg_int(x):
    x = Fraction(x)
    if x.denominator != 1 or x < 0:
        return None
    return int(x)


def sigma1(x) -> int:
    """Plain divisor sum; 0 unless x is a positive integer."""
    n = _as_nonneg_int(x)
    if not n:
        return 0
    return sigma(1, n)


def sigma1_N(N: int, x) -> Fraction:
    """Divisor sum over divisors not divisible by N.

    Zero off the non-negative integers and (N-1)/24 at zero.  ``N = 1`` means
    the plain divisor sum.
    """
    n = _as_nonneg_int(x)
    if n is None:
        return Fraction(0)
    if n == 0:
        return Fraction(N - 1, 24)
    if N == 1:
        return Fraction(sigma(1, n))
    return Fraction(sum(d for d in divisors(n) if d % N))


# eta quotients ---------------------------------------------------------------


@dataclass(frozen=True)
class EtaQuotient:
    """prod eta(t*tau)^r over ``factors = ((t, r), ...)``."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        scales = [t for t, _ in self.factors]
        if len(set(scales)) != len(scales) or any(t < 1 for t in scales):
            raise ValueError("eta quotient scales must be distinct positive integers")
        if any(r == 0 for _, r in self.factors):
            raise ValueError("eta quotient exponents must be nonzero")

    @property
    def leading_exponent(self) -> Fraction:
        return Fraction(sum(t * r for t, r in self.factors), 24)

    def inverse(self) -> "EtaQuotient":
        return EtaQuotient(tuple((t, -r) for t, r in self.factors))

    def power(self, k: int) -> "EtaQuotient":
        return EtaQuotient(tuple((t, r * k) for t, r in self.factors))


@functools.lru_cache(maxsize=64)
def _euler_product(n: int) -> tuple[int, ...]:
    """First n coefficients of prod_{m>=1} (1 - q^m), from the pentagonal theorem."""
    cs = [0] * n
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            e = kk * (3 * kk - 1) // 2
            if e < n:
                cs[e] += -1 if kk % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return tuple(cs)


def eta_series(trunc) -> QExpansion:
    """q^(1/24) prod (1 - q^n), known below q^trunc."""
    trunc = Fraction(trunc)
    off = Fraction(1, 24)
    n = max(0, -((off - trunc) // 1))
    return QExpansion(off, 1, _euler_product(n), trunc)


def eta_quotient_series(spec: EtaQuotient, trunc) -> QExpansion:
    trunc = Fraction(trunc)
    lead = spec.leading_exponent
    # number of integer-spaced terms needed after the leading power
    n = max(0, -((lead - trunc) // 1))
    if n == 0:
        return QExpansion.zero(trunc)
    result = QExpansion.one(n)
    for t, r in spec.factors:
        m = -(-n // t)
        base = V_operator(QExpansion(0, 1, _euler_product(m), m), t).truncate(n)
        result = mul(result, pow_int(base, r))
    return result.shift(lead).truncate(trunc)


# hauptmoduln ----------------------------------------------------------------


@dataclass(frozen=True)
class HauptmodulId:
    level: int
    starred: bool = False

    def __post_init__(self):
        if self.level not in SUPPORTED_LEVELS:
            raise UnsupportedLevel(f"level {self.level} is not one of {SUPPORTED_LEVELS}")
        if self.level == 1 and self.starred:
            # j itself on both sides
            object.__setattr__(self, "starred", False)

    def __str__(self):
        return f"j_{self.level}{'*' if self.starred else ''}"


@dataclass(frozen=True)
class Recipe:
    """sum_i coeff_i * quotient_i + constant."""

    terms: tuple[tuple[Fraction, EtaQuotient], ...]
    constant: Fraction


def _prime_quotient(p: int) -> EtaQuotient:
    k = 24 // (p - 1)
    return EtaQuotient(((1, k), (p, -k)))


def recipe(hid: HauptmodulId) -> Recipe:
    """Eta-quotient formula of a hauptmodul of level > 1."""
    N = hid.level
    if N == 1:
        raise UnsupportedLevel("the level-1 hauptmodul is not a linear eta-quotient recipe")
    if N in PRIME_LEVELS:
        k = 24 // (N - 1)
        base = _prime_quotient(N)
        terms = [(Fraction(1), base)]
        if hid.starred:
            terms.append((Fraction(N ** (12 // (N - 1))), base.inverse()))
        return Recipe(tuple(terms), Fraction(k))
    if N == 6:
        if not hid.starred:
            q = EtaQuotient(((1, -1), (2, 1), (3, 3), (6, -3))).power(3)
            return Recipe(((Fraction(1), q),), Fraction(-3))
        q = EtaQuotient(((1, 1), (2, -1), (3, 1), (6, -1))).power(6)
        return Recipe(((Fraction(1), q), (Fraction(2**6), q.inverse())), Fraction(6))
    if N == 10:
        if not hid.starred:
            q = EtaQuotient(((1, -1), (2, 1), (5, 5), (10, -5)))
            return Recipe(((Fraction(1), q),), Fraction(-1))
        q = EtaQuotient(((1, 1), (2, -1), (5, 1), (10, -1))).power(4)
        return Recipe(((Fraction(1), q), (Fraction(2**4), q.inverse())), Fraction(4))
    raise UnsupportedLevel(f"level {N}")


def level2_quotient() -> EtaQuotient:
    """(eta(tau)/eta(2 tau))^24; j = (x + 256)^3 / x^2 in terms of it."""
    return _prime_quotient(2)


def eisenstein_E4(trunc) -> QExpansion:
    trunc = Fraction(trunc)
    n = max(1, -((-trunc) // 1))
    return QExpansion(0, 1, [1] + [240 * sigma(3, m) for m in range(1, n)], trunc)


def eisenstein_E2(trunc) -> QExpansion:
    trunc = Fraction(trunc)
    n = max(1, -((-trunc) // 1))
    return QExpansion(0, 1, [1] + [-24 * sigma(1, m) for m in range(1, n)], trunc)


@functools.lru_cache(maxsize=128)
def _hauptmodul_cached(hid: HauptmodulId, trunc: Fraction) -> QExpansion:
    if hid.level == 1:
        e4 = eisenstein_E4(trunc + 1)
        delta = eta_quotient_series(EtaQuotient(((1, 24),)), trunc + 2)
        out = mul(pow_int(e4, 3), invert(delta))
    else:
        r = recipe(hid)
        out = QExpansion.monomial(0, trunc, r.constant)
        for c, quo in r.terms:
            out = out + eta_quotient_series(quo, trunc).scale(c)
    out = out.truncate(trunc).canonical()
    if not out.is_integral_grid():
        raise AssertionError(f"{hid} landed off the integer exponent grid")
    return out


def hauptmodul_series(hid: HauptmodulId, trunc) -> QExpansion:
    """q^-1 + c_0 + c_1 q + ... of the hauptmodul, known below q^trunc."""
    trunc = Fraction(trunc)
    if trunc <= -1:
        raise ValueError("truncation must exceed the pole order -1")
    return _hauptmodul_cached(hid, trunc)


def hauptmodul_coefficients(hid: HauptmodulId, n_max: int) -> dict[int, Fraction]:
    """{n: c_n} for -1 <= n <= n_max."""
    s = hauptmodul_series(hid, n_max + 1)
    return {n: s.coeff(n) for n in range(-1, n_max + 1)}


# Eisenstein and theta series -------------------------------------------------


def eisenstein_E2N(N: int, trunc) -> QExpansion:
    """N E2(N tau) - E2(tau) = (N-1) + 24 sum sigma1^(N)(n) q^n."""
    trunc = Fraction(trunc)
    e2 = eisenstein_E2(trunc)
    return (V_operator(e2, N).truncate(trunc).scale(N) - e2).truncate(trunc)


def theta0_series(trunc) -> QExpansion:
    """sum_{r in Z} q^(r^2)."""
    trunc = Fraction(trunc)
    terms = {0: 1}
    r = 1
    while r * r < trunc:
        terms[r * r] = 2
        r += 1
    return QExpansion.from_dict(terms, trunc, 1)


def theta_parity_series(parity: int, trunc) -> QExpansion:
    """sum over r of the given parity of q^(r^2/4)."""
    trunc = Fraction(trunc)
    terms = {}
    r = parity
    while Fraction(r * r, 4) < trunc:
        terms[Fraction(r * r, 4)] = 1 if r == 0 else 2
        r += 2
    # odd r: r^2/4 = 1/4 + integer, so unit spacing from the offset suffices
    return QExpansion.from_dict(terms, trunc, 1)
