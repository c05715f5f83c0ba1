"""Modular trace tables t_m^(N)(d), t_m^(N*)(d) and their generating series."""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

import mpmath

from .cmnum import DEFAULT_CONTEXT, PrecisionContext, faber_value, rational_round
from .errors import BadResidue, InsufficientTable, ReconstructionFailure
from .etaq import HauptmodulId, divisors, sigma1, theta_parity_series
from .quadforms import (
    atkin_lehner_prime,
    canonical_label,
    classes_gamma0,
    heegner_point,
    mu,
    omega,
    valid_residues,
)
from .series import QExpansion, V_operator

log = logging.getLogger(__name__)

# bump whenever the numeric policy (precision defaults, rounding) changes
POLICY_VERSION = 1


def trace_hid(N: int) -> HauptmodulId:
    """The function whose Faber polynomials are traced: j_N^*, or j at level 1."""
    return HauptmodulId(N, starred=N != 1)


def _is_disc(d: int) -> bool:
    return d > 0 and (-d) % 4 in (0, 1)


def trace_complex(
    N: int, m: int, d: int, h: int, ctx: PrecisionContext = DEFAULT_CONTEXT, diag: dict | None = None
) -> mpmath.mpc:
    """sum over Q_{d,N,h}/Gamma_0(N) of phi_m(alpha_Q) / |stab|, before rounding."""
    hid = trace_hid(N)
    classes = classes_gamma0(d, N, h)
    with mpmath.workprec(ctx.wp):
        total = mpmath.mpc(0)
        for fc in classes:
            total += faber_value(hid, m, heegner_point(fc.rep), ctx) / fc.stabilizer_order
    if diag is not None:
        # worst point: largest a, smallest Im alpha; eta(N tau) only converges faster
        a_max = max(fc.rep.a for fc in classes)
        diag.update(
            classes=len(classes),
            min_im_alpha=math.sqrt(d) / (2 * a_max),
            eta_terms=ctx.eta_terms(math.sqrt(d) / (2 * a_max)),
            imag_residual=float(abs(total.imag)),
        )
    return total


def trace_unstarred(
    N: int,
    m: int,
    d: int,
    h: int | None = None,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    diag: dict | None = None,
) -> Fraction:
    if d <= 0:
        raise ValueError("positive d only; boundary values come from boundary_traces")
    hs = valid_residues(d, N) if _is_disc(d) else []
    if h is None:
        if not hs:
            raise BadResidue(f"-{d} is not a square mod {4 * N}")
        h = hs[0]
    z = trace_complex(N, m, d, h, ctx, diag)
    v = rational_round(z, ctx.max_den, ctx.tol, d=d)
    if diag is not None:
        with mpmath.workprec(ctx.wp):
            diag["round_error"] = float(abs(z.real - mpmath.mpf(v.numerator) / v.denominator))
    return v


def trace_starred(N: int, m: int, d: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Fraction:
    return trace_unstarred(N, m, d, None, ctx) / 2 ** mu(N, d)


# boundary values ----------------------------------------------------------------


class BoundaryValues(NamedTuple):
    unstarred: dict[int, Fraction]
    starred: dict[int, Fraction]


def boundary_traces(N: int, principal_part: dict[int, int]) -> BoundaryValues:
    """t(0) and t(-kappa^2) from the principal part {n: a(-n)} of f.

    t(0) = 2 sum_n a(-n) sum_{e | N} e sigma1(n/e);
    t(-kappa^2) = -2^{mu_N(kappa)} kappa sum_{kappa | n} a(-n);
    starred values divide by 2^{mu_N(d)}, with mu_N(0) = omega(N).
    """
    top = max((n for n, a in principal_part.items() if a), default=0)
    t0 = Fraction(0)
    for n, a in principal_part.items():
        if n < 1:
            continue
        t0 += 2 * a * sum(e * sigma1(Fraction(n, e)) for e in divisors(N))
    un = {0: t0}
    st = {0: t0 / 2 ** omega(N)}
    for kappa in range(1, top + 1):
        s = sum(a for n, a in principal_part.items() if n >= 1 and n % kappa == 0)
        val = Fraction(-(2 ** mu(N, kappa)) * kappa * s)
        un[-kappa * kappa] = val
        st[-kappa * kappa] = val / 2 ** mu(N, kappa)
    return BoundaryValues(un, st)


def faber_principal_part(m: int) -> dict[int, int]:
    return {m: 1}


# tables -------------------------------------------------------------------------


@dataclass
class TraceTable:
    level: int
    m: int
    starred: bool
    d_max: int
    entries: dict[int, Fraction] = field(default_factory=dict)
    provenance: dict[int, str] = field(default_factory=dict)

    def __getitem__(self, d: int) -> Fraction:
        """Entry at d; zero for inadmissible d and for negative d off the boundary list."""
        if d > self.d_max:
            raise InsufficientTable(f"table for N={self.level} stops at d={self.d_max}, asked for {d}")
        return self.entries.get(d, Fraction(0))

    def positive(self) -> dict[int, Fraction]:
        return {d: v for d, v in self.entries.items() if d > 0}

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "m": self.m,
            "starred": self.starred,
            "d_max": self.d_max,
            "entries": {str(d): _fmt(v) for d, v in sorted(self.entries.items())},
            "provenance": {str(d): p for d, p in sorted(self.provenance.items())},
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TraceTable":
        return cls(
            obj["level"],
            obj["m"],
            obj["starred"],
            obj["d_max"],
            {int(d): Fraction(v) for d, v in obj["entries"].items()},
            {int(d): p for d, p in obj["provenance"].items()},
        )


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class TraceTables(NamedTuple):
    unstarred: TraceTable
    starred: TraceTable


def admissible_discriminants(N: int, d_max: int) -> list[int]:
    return [d for d in range(1, d_max + 1) if _is_disc(d) and valid_residues(d, N)]


def compute_trace_table(
    N: int, m: int, d_max: int, ctx: PrecisionContext = DEFAULT_CONTEXT, diagnostics: dict | None = None
) -> TraceTables:
    if d_max < 4:
        raise ValueError("d_max must be at least 4")
    un = TraceTable(N, m, False, d_max)
    st = TraceTable(N, m, True, d_max)
    bv = boundary_traces(N, faber_principal_part(m))
    for d in sorted(bv.unstarred):
        un.entries[d] = bv.unstarred[d]
        st.entries[d] = bv.starred[d]
        un.provenance[d] = st.provenance[d] = "boundary-formula"
    for d in admissible_discriminants(N, d_max):
        diag = {} if diagnostics is not None else None
        v = trace_unstarred(N, m, d, None, ctx, diag)
        if diag is not None:
            diagnostics[d] = diag
            log.debug("N=%d d=%d %s", N, d, diag)
        un.entries[d] = v
        st.entries[d] = v / 2 ** mu(N, d)
        un.provenance[d] = st.provenance[d] = "computed"
    return TraceTables(un, st)


def _cache_key(N: int, m: int, d_max: int, ctx: PrecisionContext) -> str:
    blob = json.dumps(
        {"N": N, "m": m, "d_max": d_max, "bits": ctx.bits, "guard": ctx.guard_bits, "max_den": ctx.max_den,
         "policy": POLICY_VERSION},
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:20]


def trace_table(
    N: int,
    m: int,
    d_max: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    cache_dir: str | Path | None = None,
    diagnostics: dict | None = None,
) -> TraceTables:
    """Starred and unstarred tables for all admissible d <= d_max plus boundary entries.

    With ``cache_dir``, results are stored as one JSON file per
    (N, m, d_max, precision policy) and reused on later calls.
    """
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"traces_N{N}_m{m}_d{d_max}_{_cache_key(N, m, d_max, ctx)}.json"
        if path.exists():
            obj = json.loads(path.read_text())
            log.debug("trace cache hit %s", path)
            return TraceTables(TraceTable.from_dict(obj["unstarred"]), TraceTable.from_dict(obj["starred"]))
    tables = compute_trace_table(N, m, d_max, ctx, diagnostics)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(tables_to_json(tables))
        tmp.replace(path)
    return tables


def tables_to_json(tables: TraceTables) -> str:
    return json.dumps({"unstarred": tables.unstarred.as_dict(), "starred": tables.starred.as_dict()},
                      indent=1, sort_keys=True)


# generating series --------------------------------------------------------------


def r_sum(table: TraceTable, D: int) -> Fraction:
    """sum over r in Z of table[D - r^2]; only finitely many entries are nonzero."""
    lo = min(min(table.entries), 0)
    total = table[D]
    r = 1
    while D - r * r >= lo:
        total += 2 * table[D - r * r]
        r += 1
    return total


def G2_series(table: TraceTable, n_max: int) -> QExpansion:
    """sum_{n >= -1} (sum_r t*(4n - r^2)) q^n, known below q^(n_max+1)."""
    if 4 * n_max > table.d_max:
        raise InsufficientTable(f"need d up to {4 * n_max}, table has {table.d_max}")
    return QExpansion.from_dict({n: r_sum(table, 4 * n) for n in range(-1, n_max + 1)}, n_max + 1)


def zagier_g_series(table: TraceTable, d_max: int | None = None) -> QExpansion:
    """sum_{d>0} t_m(d) q^d + 2 sigma1(m) - sum_{kappa | m} kappa q^(-kappa^2), level one.

    At level one the boundary entries are exactly 2 sigma1(m) and -kappa,
    so this is the table read as a series.
    """
    if table.level != 1:
        raise ValueError("g_m is the level-one generating function")
    d_max = table.d_max if d_max is None else d_max
    if d_max > table.d_max:
        raise InsufficientTable(f"need d up to {d_max}, table has {table.d_max}")
    terms = {d: v for d, v in table.entries.items() if d <= d_max}
    return QExpansion.from_dict(terms, d_max + 1)


@dataclass(frozen=True)
class ThetaComponents:
    level: int
    h_mu: tuple[QExpansion, ...]
    split_even: QExpansion
    split_odd: QExpansion
    theta_even: QExpansion
    theta_odd: QExpansion


def theta_decomposition(table: TraceTable, N: int, D_max: int) -> ThetaComponents:
    """h_mu = sum_{d = -mu^2 mod 4N} t(d) q^(d/4N) over d <= D_max, and the parity splits."""
    if table.starred:
        raise ValueError("theta decomposition is built from the unstarred table")
    if D_max > table.d_max:
        raise InsufficientTable(f"need d up to {D_max}, table has {table.d_max}")
    M = 4 * N
    trunc = Fraction(D_max + 1, M)
    terms: list[dict] = [{} for _ in range(2 * N)]
    for d in range(min(min(table.entries), 0), D_max + 1):
        t = table[d]
        if not t:
            continue
        for mu_ in range(2 * N):
            if (mu_ * mu_ + d) % M == 0:
                terms[mu_][Fraction(d, M)] = t
    h = tuple(QExpansion.from_dict(tm, trunc, Fraction(1, M)) for tm in terms)
    even = sum((V_operator(h[k], N) for k in range(0, 2 * N, 2)), QExpansion.zero(trunc * N))
    odd = sum((V_operator(h[k], N) for k in range(1, 2 * N, 2)), QExpansion.zero(trunc * N))
    tt = trunc * N
    return ThetaComponents(N, h, even, odd, theta_parity_series(0, tt + 2), theta_parity_series(1, tt + 2))


def split_identity_sides(table_un: TraceTable, table_st: TraceTable, N: int, n_max: int):
    """(LHS, RHS) of  g^(N,0) theta^(0) + g^(N,3) theta^(1) = 2^{omega(N)} G2, below q^(n_max+1)."""
    # q^(d/4) with d <= 4 n_max + 3 covers every exponent below q^(n_max+1)
    tc = theta_decomposition(table_un, N, 4 * n_max + 3)
    lhs = (tc.split_even * tc.theta_even + tc.split_odd * tc.theta_odd).truncate(n_max + 1)
    rhs = G2_series(table_st, n_max).scale(2 ** omega(N)).truncate(n_max + 1)
    return lhs, rhs


# Atkin-Lehner cross-check ------------------------------------------------------


def starred_by_fricke_orbits(p: int, m: int, d: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Fraction:
    """t*(d) at prime level p | d by merging Gamma_0(p)-classes under W_p.

    Pairs {C, W C} contribute once; W-fixed classes have a doubled
    stabilizer in the Fricke group and contribute with weight 1/2.  Also
    checks numerically that f(alpha_C) = f(alpha_{W C}).
    """
    if d % p:
        raise ValueError("the orbit merge is only meaningful for p | d")
    hid = trace_hid(p)
    h = valid_residues(d, p)[0]
    classes = {fc.label: fc for fc in classes_gamma0(d, p, h)}
    done = set()
    with mpmath.workprec(ctx.wp):
        total = mpmath.mpc(0)
        for label, fc in sorted(classes.items(), key=lambda kv: tuple(kv[1].rep)):
            if label in done:
                continue
            w = atkin_lehner_prime(fc.rep, p)
            wlabel = canonical_label(w, p)
            if wlabel not in classes:
                raise AssertionError(f"W_{p} image of {fc.rep} left Q_(d,{p},h)")
            v = faber_value(hid, m, heegner_point(fc.rep), ctx)
            vw = faber_value(hid, m, heegner_point(classes[wlabel].rep), ctx)
            if abs(v - vw) > ctx.tol * (1 + abs(v)):
                raise ReconstructionFailure(f"phi not Fricke-invariant at {fc.rep}", v - vw, d)
            done.add(label)
            done.add(wlabel)
            weight = 2 if wlabel == label else 1
            total += v / (fc.stabilizer_order * weight)
        return rational_round(total, ctx.max_den, ctx.tol, d=d)
