"""Positive definite binary quadratic forms and their Gamma_0(N)-classes.

Forms are ``[a, b, c] = aX^2 + bXY + cY^2``; matrices act on the right,
``act(Q, g)(X, Y) = Q(alpha X + beta Y, gamma X + delta Y)``, so that
``act(act(Q, g), h) == act(Q, g @ h)``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import BadDiscriminant, BadResidue, NotDivisible
from .etaq import prime_factors


class BQF(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __str__(self):
        return f"[{self.a},{self.b},{self.c}]"


class Mat(NamedTuple):
    """Integer 2x2 matrix [[al, be], [ga, de]]."""

    al: int
    be: int
    ga: int
    de: int

    def det(self) -> int:
        return self.al * self.de - self.be * self.ga

    def __matmul__(self, o: "Mat") -> "Mat":
        return Mat(
            self.al * o.al + self.be * o.ga,
            self.al * o.be + self.be * o.de,
            self.ga * o.al + self.de * o.ga,
            self.ga * o.be + self.de * o.de,
        )

    def inv(self) -> "Mat":
        # determinant one assumed
        return Mat(self.de, -self.be, -self.ga, self.al)

    def in_gamma0(self, N: int) -> bool:
        return self.ga % N == 0

    def neg(self) -> "Mat":
        return Mat(-self.al, -self.be, -self.ga, -self.de)


GroupElement = Mat

IDENTITY = Mat(1, 0, 0, 1)
S = Mat(0, -1, 1, 0)
T = Mat(1, 1, 0, 1)
# order 3 in PSL2(Z); fixes [a, a, a]
RHO = Mat(0, -1, 1, 1)


def discriminant(Q: BQF) -> int:
    return Q.disc


def act(Q: BQF, g: Mat) -> BQF:
    a, b, c = Q
    al, be, ga, de = g
    return BQF(
        a * al * al + b * al * ga + c * ga * ga,
        2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de,
        a * be * be + b * be * de + c * de * de,
    )


def translate(k: int) -> Mat:
    return Mat(1, k, 0, 1)


def sl2_reduce(Q: BQF) -> tuple[BQF, Mat]:
    """Gauss reduction; returns (R, g) with act(Q, g) == R and R reduced."""
    if Q.a <= 0 or Q.disc >= 0:
        raise ValueError(f"{Q} is not positive definite")
    g = IDENTITY
    while True:
        a, b, c = Q
        # b into (-a, a]
        k = (a - b) // (2 * a)
        if k:
            tk = translate(k)
            Q = act(Q, tk)
            g = g @ tk
            a, b, c = Q
        if a > c or (a == c and b < 0):
            Q = act(Q, S)
            g = g @ S
            continue
        return Q, g


def is_reduced(Q: BQF) -> bool:
    a, b, c = Q
    if not (abs(b) <= a <= c):
        return False
    if (abs(b) == a or a == c) and b < 0:
        return False
    return True


def stabilizer(R: BQF) -> tuple[Mat, ...]:
    """SL2(Z)-stabilizer of a reduced form, one matrix per +-pair."""
    a, b, c = R
    if a == c and b == 0:
        return (IDENTITY, S)
    if a == b == c:
        return (IDENTITY, RHO, RHO @ RHO)
    return (IDENTITY,)


def _check_disc(d: int):
    if d <= 0 or (-d) % 4 not in (0, 1):
        raise BadDiscriminant(f"-{d} is not a negative discriminant (must be 0 or 1 mod 4)")


@functools.lru_cache(maxsize=4096)
def reduced_forms(d: int) -> tuple[BQF, ...]:
    """All reduced forms of discriminant -d, primitive or not, sorted by (a, b, c)."""
    _check_disc(d)
    out = []
    a = 1
    while 3 * a * a <= d:
        for b in range(-a + 1, a + 1):
            if (b * b + d) % (4 * a):
                continue
            c = (b * b + d) // (4 * a)
            if c < a:
                continue
            Q = BQF(a, b, c)
            if is_reduced(Q):
                out.append(Q)
        a += 1
    return tuple(sorted(out))


@dataclass(frozen=True)
class FormClass:
    rep: BQF
    level: int
    h: int | None
    stabilizer_order: int
    label: tuple[BQF, int]

    @property
    def reduced(self) -> BQF:
        return self.label[0]

    def as_dict(self) -> dict:
        a, b, c = self.rep
        R, i = self.label
        return {"a": a, "b": b, "c": c, "stab": self.stabilizer_order, "label": [list(R), i]}


def classes_sl2(d: int) -> list[FormClass]:
    return [FormClass(R, 1, None, len(stabilizer(R)), (R, 0)) for R in reduced_forms(d)]


# cosets of Gamma_0(N) ------------------------------------------------------------


def gamma0_index(N: int) -> int:
    idx = N
    for p in prime_factors(N):
        idx = idx * (p + 1) // p
    return idx


def _complete(c: int, d: int) -> Mat:
    """Some matrix of determinant one with bottom row (c, d); gcd(c, d) == 1."""
    g, x, y = _egcd(c, d)
    # c*x + d*y = 1  ->  [[y, -x], [c, d]] has det y*d + x*c = 1
    assert g == 1
    return Mat(y, -x, c, d)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@functools.lru_cache(maxsize=None)
def coset_reps(N: int) -> tuple[Mat, ...]:
    """Representatives g_i of the right cosets Gamma_0(N) g_i in SL2(Z); g_0 = identity."""
    reps: list[Mat] = [IDENTITY]
    for c in range(1, N + 1):
        for d in range(N):
            if math.gcd(math.gcd(c, d), N) != 1:
                continue
            dd = d
            while math.gcd(c, dd) != 1:
                dd += N
            g = _complete(c, dd)
            if all(not (g @ r.inv()).in_gamma0(N) for r in reps):
                reps.append(g)
    if len(reps) != gamma0_index(N):
        raise AssertionError(f"found {len(reps)} cosets for N={N}, expected {gamma0_index(N)}")
    return tuple(reps)


def coset_index(g: Mat, N: int) -> int:
    for i, r in enumerate(coset_reps(N)):
        if (g @ r.inv()).in_gamma0(N):
            return i
    raise AssertionError("coset representatives do not cover SL2(Z)")


def canonical_label(Q: BQF, N: int) -> tuple[BQF, int]:
    """(reduced form, coset index) identifying the Gamma_0(N)-class of Q."""
    R, g = sl2_reduce(Q)
    # Q = act(R, g^-1); its Gamma_0(N)-orbit is determined by Gamma_0(N) g s, s in Stab(R)
    return R, min(coset_index(g @ s, N) for s in stabilizer(R))


def _stab_order_in_gamma0(R: BQF, g: Mat, N: int) -> int:
    # Stab(act(R, g^-1)) = g Stab(R) g^-1
    return sum(1 for s in stabilizer(R) if (g @ s @ g.inv()).in_gamma0(N))


def minimize_in_gamma0(Q: BQF, N: int) -> tuple[BQF, Mat]:
    """Gamma_0(N)-equivalent form with the smallest leading coefficient.

    Smallest ``a`` means the largest imaginary part sqrt(d)/(2a) of the CM
    point; ties prefer the smaller |b|, then positive b.  Returns (Q', M) with
    act(Q, M) == Q' and M in Gamma_0(N).
    """
    d = -Q.disc
    a = Q.a
    best = (a, 1, 0)  # (value, x, y)
    k = 1
    while True:
        y = N * k
        D = 4 * a * best[0] - d * y * y
        if D < 0:
            break
        s = math.isqrt(D)
        lo = -((Q.b * y + s) // (2 * a)) - 1
        hi = (-Q.b * y + s) // (2 * a) + 1
        for x in range(lo, hi + 1):
            if math.gcd(x, y) != 1:
                continue
            v = Q(x, y)
            if v < best[0]:
                best = (v, x, y)
        k += 1
    _, x, y = best
    if y == 0:
        M = IDENTITY
    else:
        g, u, w = _egcd(x, y)
        # x*u + y*w = 1  ->  [[x, -w], [y, u]] has det x*u + w*y = 1
        M = Mat(x, -w, y, u)
    Q1 = act(Q, M)
    a1, b1, _ = Q1
    k = (a1 - b1) // (2 * a1)
    M = M @ translate(k)
    Q1 = act(Q, M)
    # b and -b both sit in (-a, a] only when |b| = a; keep the canonical b = a
    return Q1, M


def classes_gamma0(d: int, N: int, h: int) -> list[FormClass]:
    """Representatives of Q_{d,N,h} / Gamma_0(N), sorted by (a, b, c) of the rep.

    Walks every reduced form R of discriminant -d through every right coset
    of Gamma_0(N), keeping act(R, g_i^-1) when it lies in Q_{d,N,h}; this is
    exhaustive by construction.  Representatives are then moved to the
    smallest leading coefficient in their orbit.
    """
    _check_disc(d)
    if (h * h + d) % (4 * N):
        raise BadResidue(f"h={h}: h^2 is not -{d} mod {4 * N}")
    return list(_classes_gamma0(d, N, h % (2 * N)))


@functools.lru_cache(maxsize=8192)
def _classes_gamma0(d: int, N: int, h: int) -> tuple[FormClass, ...]:
    seen: dict[tuple[BQF, int], FormClass] = {}
    for R in reduced_forms(d):
        for g in coset_reps(N):
            Q = act(R, g.inv())
            if Q.a % N or (Q.b - h) % (2 * N):
                continue
            label = (R, min(coset_index(g @ s, N) for s in stabilizer(R)))
            if label in seen:
                continue
            rep, _ = minimize_in_gamma0(Q, N)
            seen[label] = FormClass(rep, N, h, _stab_order_in_gamma0(R, g, N), label)
    return tuple(sorted(seen.values(), key=lambda fc: tuple(fc.rep)))


def valid_residues(d: int, N: int) -> list[int]:
    """All h mod 2N with h^2 = -d mod 4N."""
    return [h for h in range(2 * N) if (h * h + d) % (4 * N) == 0]


def is_admissible(d: int, N: int) -> bool:
    return bool(valid_residues(d, N))


def scan_gamma0_labels(d: int, N: int, h: int, widen: int = 1) -> set[tuple[BQF, int]]:
    """Labels reached by the bounded candidate scan over a <= N(ceil(sqrt(d/3)) + 2).

    ``widen`` multiplies both the a and |b| bounds; used as a coverage check of
    :func:`classes_gamma0`.
    """
    amax = N * (math.isqrt(d // 3) + 2) * widen
    labels = set()
    for a in range(N, amax + 1, N):
        bmax = (2 * a + 2 * N) * widen
        b0 = h % (2 * N)
        for b in range(b0 - ((b0 + bmax) // (2 * N)) * 2 * N, bmax + 1, 2 * N):
            if abs(b) > bmax or (b * b + d) % (4 * a):
                continue
            c = (b * b + d) // (4 * a)
            if c <= 0:
                continue
            labels.add(canonical_label(BQF(a, b, c), N))
    return labels


# Atkin-Lehner, Heegner points, mu ------------------------------------------------


def atkin_lehner_prime(Q: BQF, p: int) -> BQF:
    """Q o W_p = [c p, -b, a / p]."""
    a, b, c = Q
    if a % p:
        raise NotDivisible(f"{p} does not divide a={a}")
    return BQF(c * p, -b, a // p)


class CMPoint(NamedTuple):
    """alpha = (minus_b + i sqrt(d)) / two_a, kept exactly."""

    minus_b: int
    d: int
    two_a: int

    def __str__(self):
        return f"({self.minus_b} + sqrt(-{self.d}))/{self.two_a}"


def heegner_point(Q: BQF) -> CMPoint:
    if Q.a <= 0 or Q.disc >= 0:
        raise ValueError(f"{Q} is not positive definite")
    return CMPoint(-Q.b, -Q.disc, 2 * Q.a)


def omega(n: int) -> int:
    return len(prime_factors(n)) if n else 0


def mu(N: int, d: int) -> int:
    """Number of distinct primes dividing gcd(N, d); gcd(N, 0) = N."""
    g = math.gcd(N, d)
    return 0 if g == 1 else omega(g)
