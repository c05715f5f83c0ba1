"""Command-line front end: expand | faber | classlist | trace | verify."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import identities as idn
from .cmnum import PrecisionContext
from .errors import MoontraceError, ReconstructionFailure, UnsupportedLevel
from .etaq import (
    SUPPORTED_LEVELS,
    EtaQuotient,
    HauptmodulId,
    eisenstein_E2,
    eisenstein_E2N,
    eta_quotient_series,
    hauptmodul_series,
    recipe,
    theta0_series,
)
from .faber import faber
from .identities import LEVELS_WITH_THEOREM
from .quadforms import classes_gamma0, mu, scan_gamma0_labels, valid_residues
from .series import format_series
from .traces import compute_trace_table, tables_to_json, trace_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
CACHE_ENV = "MOONTRACE_CACHE_DIR"
IDENTITIES = ("theorem1-part1", "theorem1-part2", "kaneko", "eisenstein", "u-relations", "all")
TARGETS = ("hauptmodul", "eta-quotient", "eisenstein", "theta", "faber")

log = logging.getLogger("moontrace")


class UsageError(MoontraceError):
    pass


@dataclass(frozen=True)
class Config:
    level: int | None
    starred: bool
    n_max: int
    d_max: int
    h: int | None
    precision_bits: int
    trunc: int
    fmt: str
    cache_dir: str | None
    paranoid: bool
    verbose: bool

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "Config":
        level = getattr(ns, "level", None)
        if level is not None and level not in SUPPORTED_LEVELS:
            raise UnsupportedLevel(f"level {level} is not one of {SUPPORTED_LEVELS}")
        n_max = getattr(ns, "n_max", None)
        if n_max is not None and n_max < -1:
            raise UsageError("--n-max must be >= -1")
        bits = getattr(ns, "precision_bits", 256)
        if bits < 64:
            raise UsageError("--precision-bits must be >= 64")
        return cls(
            level=level,
            starred=getattr(ns, "starred", False),
            n_max=n_max,
            d_max=getattr(ns, "d_max", None),
            h=getattr(ns, "h", None),
            precision_bits=bits,
            trunc=getattr(ns, "trunc", None),
            fmt=ns.format,
            cache_dir=ns.cache_dir or os.environ.get(CACHE_ENV) or None,
            paranoid=ns.paranoid,
            verbose=ns.verbose,
        )

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(bits=self.precision_bits)


def _q(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _emit(cfg: Config, obj, header: list[str], rows: list[list], text: str | None = None) -> str:
    if cfg.fmt == "json":
        return _dump_json(obj)
    if cfg.fmt == "csv":
        return _csv(header, rows)
    return text if text is not None else _table(header, rows)


# commands ----------------------------------------------------------------------


def _parse_eta(spec: str) -> EtaQuotient:
    try:
        pairs = [tuple(int(x) for x in part.split(":")) for part in spec.split(",") if part]
        return EtaQuotient(tuple(pairs))
    except ValueError as e:
        raise UsageError(f"bad --eta value {spec!r}; expected t:r,t:r,...") from e


def cmd_expand(cfg: Config, ns) -> tuple[int, str]:
    n_max = 10 if cfg.n_max is None else cfg.n_max
    trunc = n_max + 1
    level = cfg.level if cfg.level is not None else 1
    target = ns.target
    if target == "hauptmodul":
        s = hauptmodul_series(HauptmodulId(level, cfg.starred), trunc)
    elif target == "eta-quotient":
        if ns.eta:
            quo = _parse_eta(ns.eta)
        elif level == 1:
            quo = EtaQuotient(((1, 24),))
        else:
            quo = recipe(HauptmodulId(level, False)).terms[0][1]
        s = eta_quotient_series(quo, trunc)
    elif target == "eisenstein":
        s = eisenstein_E2(trunc) if level == 1 else eisenstein_E2N(level, trunc)
    elif target == "theta":
        s = theta0_series(trunc)
    else:
        s = faber(HauptmodulId(level, cfg.starred), ns.m).expansion.truncate(trunc)
    rows = [[_q(e), _q(c)] for e, c in s.items()]
    return EXIT_OK, _emit(cfg, s.to_json_obj(), ["exponent", "coefficient"], rows, format_series(s))


def cmd_faber(cfg: Config, ns) -> tuple[int, str]:
    level = cfg.level if cfg.level is not None else 1
    phi = faber(HauptmodulId(level, cfg.starred), ns.m)
    obj = {"function": str(phi.hid), "m": phi.m, "coefficients": [_q(c) for c in phi.coeffs]}
    rows = [[k, _q(c)] for k, c in enumerate(phi.coeffs)]
    return EXIT_OK, _emit(cfg, obj, ["power", "coefficient"], rows, f"phi_{phi.m}({phi.hid}) = {phi.describe()}")


def cmd_classlist(cfg: Config, ns) -> tuple[int, str]:
    N = cfg.level if cfg.level is not None else 1
    d = ns.d
    hs = [cfg.h] if cfg.h is not None else valid_residues(d, N)
    if not hs:
        raise UsageError(f"-{d} is not a square mod {4 * N}; Q_(d,N) is empty")
    out, rows = [], []
    status = EXIT_OK
    for h in hs:
        classes = classes_gamma0(d, N, h)
        entry = {"h": h, "classes": [c.as_dict() for c in classes]}
        if cfg.paranoid:
            scanned = scan_gamma0_labels(d, N, h, widen=4)
            covered = scanned == {c.label for c in classes}
            entry["scan_agrees"] = covered
            if not covered:
                status = EXIT_FAIL
        out.append(entry)
        rows += [[h, c.rep.a, c.rep.b, c.rep.c, c.stabilizer_order] for c in classes]
    obj = {"level": N, "d": d, "mu": mu(N, d), "residues": out}
    return status, _emit(cfg, obj, ["h", "a", "b", "c", "stab"], rows)


def cmd_trace(cfg: Config, ns) -> tuple[int, str]:
    N = cfg.level if cfg.level is not None else 1
    d_max = 12 if cfg.d_max is None else cfg.d_max
    if d_max < 4:
        raise UsageError("--d-max must be at least 4")
    diag: dict | None = {} if cfg.verbose else None
    tables = trace_table(N, ns.m, d_max, cfg.ctx, cfg.cache_dir, diag)
    status = EXIT_OK
    if cfg.paranoid:
        again = compute_trace_table(N, ns.m, d_max, cfg.ctx.doubled())
        if again.unstarred.entries != tables.unstarred.entries:
            status = EXIT_NUMERIC
            log.error("doubled precision changed the table")
    un, st = tables
    rows = [[d, _q(un[d]), _q(st[d]), un.provenance[d]] for d in sorted(un.entries)]
    if cfg.fmt == "json":
        obj = json.loads(tables_to_json(tables))
        if diag:
            obj["diagnostics"] = {str(d): v for d, v in sorted(diag.items())}
        return status, _dump_json(obj)
    return status, _emit(cfg, None, ["d", "t", "t*", "provenance"], rows)


def _run_identity(name: str, N: int, cfg: Config):
    kw = {"ctx": cfg.ctx, "cache_dir": cfg.cache_dir}
    if name == "kaneko":
        return [idn.verify_kaneko(12 if cfg.n_max is None else cfg.n_max, **kw)]
    if name == "theorem1-part1":
        return [idn.verify_theorem1_part1(N, 12 if cfg.n_max is None else cfg.n_max, **kw)]
    if name == "theorem1-part2":
        return [idn.verify_theorem1_part2(N, 6 if cfg.n_max is None else cfg.n_max, **kw)]
    if name == "eisenstein":
        return [idn.verify_eisenstein(N, 12 if cfg.n_max is None else cfg.n_max, **kw)]
    if name == "u-relations":
        return [idn.verify_u_relations(N, 20 if cfg.trunc is None else cfg.trunc)]
    raise UsageError(f"unknown identity {name}")


def cmd_verify(cfg: Config, ns) -> tuple[int, str]:
    levels = [cfg.level] if cfg.level is not None else [1, *LEVELS_WITH_THEOREM]
    names = [ns.identity] if ns.identity != "all" else [n for n in IDENTITIES if n != "all"]
    reports = []
    for N in levels:
        for name in names:
            if (name == "kaneko") != (N == 1):
                if ns.identity == "all" or cfg.level is None:
                    continue
                raise UsageError(
                    "kaneko is the level-one identity" if name == "kaneko" else f"{name} needs a level in "
                    f"{LEVELS_WITH_THEOREM}"
                )
            reports += _run_identity(name, N, cfg)
    ok = all(r.passed for r in reports)
    rows = [[r.identity, r.level, f"{r.n_min}..{r.n_max}", "pass" if r.passed else "FAIL",
             ",".join(str(x.n) for x in r.failures())] for r in reports]
    obj = {"pass": ok, "reports": [r.as_dict() for r in reports]}
    if not cfg.verbose:
        for rep in obj["reports"]:
            rep.pop("elapsed_s", None)
    text = _table(["identity", "N", "n", "result", "failing n"], rows)
    for r in reports:
        if "coefficients" in r.extra:
            text += f"\nN={r.level}: residual {r.extra['residual']} = " + " + ".join(
                f"({c})*{b}" for c, b in zip(r.extra["coefficients"], r.extra["basis"]))
    return (EXIT_OK if ok else EXIT_FAIL), _emit(cfg, obj, ["identity", "N", "n", "result", "failing_n"], rows, text)


# parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--cache-dir", default=None, help=f"trace cache directory (or ${CACHE_ENV})")
    common.add_argument("--paranoid", action="store_true", help="run independent cross-checks as well")
    common.add_argument("--verbose", "-v", action="store_true")
    common.add_argument("--precision-bits", type=int, default=256)

    level = argparse.ArgumentParser(add_help=False)
    level.add_argument("--level", "-N", type=int, default=None)
    level.add_argument("--starred", action="store_true", help="use the Fricke-group hauptmodul j_N^*")

    p = argparse.ArgumentParser(prog="moontrace", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", parents=[common, level], help="print a q-expansion")
    e.add_argument("--target", choices=TARGETS, default="hauptmodul")
    e.add_argument("--n-max", type=int, default=None)
    e.add_argument("--m", type=int, default=2, help="Faber index for --target faber")
    e.add_argument("--eta", default=None, help="eta quotient as t:r,t:r,... for --target eta-quotient")

    f = sub.add_parser("faber", parents=[common, level], help="print phi_m of a hauptmodul")
    f.add_argument("--m", type=int, default=2)

    c = sub.add_parser("classlist", parents=[common, level], help="Gamma_0(N)-classes of discriminant -d")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--h", type=int, default=None)

    t = sub.add_parser("trace", parents=[common, level], help="trace table for d <= d_max")
    t.add_argument("--d-max", type=int, default=None)
    t.add_argument("--m", type=int, default=2)

    v = sub.add_parser("verify", parents=[common, level], help="check the trace identities")
    v.add_argument("--identity", choices=IDENTITIES, default="all")
    v.add_argument("--n-max", type=int, default=None)
    v.add_argument("--trunc", type=int, default=None, help="series truncation for u-relations")
    return p


COMMANDS = {"expand": cmd_expand, "faber": cmd_faber, "classlist": cmd_classlist, "trace": cmd_trace,
            "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = Config.from_args(ns)
        status, text = COMMANDS[ns.command](cfg, ns)
    except (UsageError, UnsupportedLevel) as e:
        print(f"moontrace: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ReconstructionFailure as e:
        print(f"moontrace: numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except MoontraceError as e:
        print(f"moontrace: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
