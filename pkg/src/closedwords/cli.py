"""Command line front end.

Subcommands: census, avoid, mu, verify, bounds, report.  Settings come from
(lowest to highest priority) built-in defaults, a ``key=value`` config file
(``--config`` or the ``CLOSEDWORDS_CONFIG`` environment variable), and flags.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import logging
import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Dict, List, Optional

from closedwords import bounds as bd
from closedwords.avoidance import (
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_MU_SCAN_BUDGET,
    BudgetExceededError,
    avoidance_count,
    mu_upper_lemma1,
    mu_with_witness,
)
from closedwords.census import CensusCache, CensusFileError, CensusTable, census_range
from closedwords.word_core import parse_word, render_word

log = logging.getLogger("closedwords")

CONFIG_ENV = "CLOSEDWORDS_CONFIG"
LEMMA1_MAX_PATTERN = 5


@dataclass(frozen=True)
class Config:
    q: int = 2
    cache_dir: Path = Path(".closedwords-cache")
    workers: int = 1
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET
    mu_scan_budget: int = DEFAULT_MU_SCAN_BUDGET
    kappa: float = 2.0
    output_format: str = "csv"

    def validate(self) -> "Config":
        if self.q < 2:
            raise ValueError("q must be >= 2")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.enumeration_budget < 1 or self.mu_scan_budget < 1:
            raise ValueError("budgets must be positive")
        if not self.kappa > 1:
            raise ValueError("kappa must be > 1")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output_format must be csv or json")
        return self


_CASTS = {"q": int, "cache_dir": Path, "workers": int, "enumeration_budget": int,
          "mu_scan_budget": int, "kappa": float, "output_format": str}


def _parse_int(text: str) -> int:
    # accepts 2**34 style budgets as well as plain decimals
    if "**" in text:
        base, exp = text.split("**", 1)
        return int(base) ** int(exp)
    return int(text)


def load_config(path: Optional[Path]) -> Config:
    cfg = Config()
    if path is None:
        return cfg
    updates = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _CASTS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        cast = _CASTS[key]
        updates[key] = _parse_int(value) if cast is int else cast(value)
    return replace(cfg, **updates)


def parse_range(text: str) -> List[int]:
    """``"2..14"``, ``"7"`` or ``"1000,10000"`` into a list of ints."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _common(p: argparse.ArgumentParser, q=True) -> None:
    if q:
        p.add_argument("--q", type=int, help="alphabet size")
    p.add_argument("--config", type=Path, help=f"key=value config file (or ${CONFIG_ENV})")
    p.add_argument("--cache-dir", type=Path)
    p.add_argument("--workers", type=int)
    p.add_argument("--enumeration-budget", type=_parse_int)
    p.add_argument("--mu-scan-budget", type=_parse_int)
    p.add_argument("--format", dest="output_format", choices=["csv", "json"])
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="closedwords", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="exact C(n), B(n) by exhaustive scan")
    _common(p)
    p.add_argument("--n", required=True, type=parse_range, help="range like 2..12")

    p = sub.add_parser("avoid", help="number of words avoiding one pattern")
    _common(p)
    p.add_argument("--w", required=True, help="pattern, e.g. aab")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--bound", action="store_true", help="also print the block bound")

    p = sub.add_parser("mu", help="max avoidance count over patterns of length m")
    _common(p)
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--m", required=True, type=int)
    p.add_argument("--bound", action="store_true", help="also print the block bound")
    p.add_argument("--witness", action="store_true", help="print a maximizing pattern")

    p = sub.add_parser("verify", help="run every exact inequality check")
    _common(p)
    p.add_argument("--n-max", required=True, type=int)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--suppress-timestamp", action="store_true")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("bounds", help="evaluate one bound formula over a range")
    _common(p)
    p.add_argument("--n", required=True, type=parse_range)
    p.add_argument("--formula", required=True, choices=bd.FORMULAS)
    p.add_argument("--kappa", type=float)
    p.add_argument("--out", type=Path, help="report file (default: under cache dir)")

    p = sub.add_parser("report", help="all bound formulas, one file each")
    _common(p)
    p.add_argument("--n", required=True, type=parse_range)
    p.add_argument("--kappa", type=float)
    p.add_argument("--out-dir", type=Path, default=Path("reports"))
    p.add_argument("--suppress-timestamp", action="store_true")
    return parser


def resolve_config(args: argparse.Namespace) -> Config:
    path = args.config
    if path is None and os.environ.get(CONFIG_ENV):
        path = Path(os.environ[CONFIG_ENV])
    cfg = load_config(path)
    overrides = {}
    for f in fields(Config):
        value = getattr(args, f.name, None)
        if value is not None:
            overrides[f.name] = value
    return replace(cfg, **overrides).validate()


def _emit_rows(header: List[str], rows: List[list], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps({"rows": [dict(zip(header, map(_jsonable, r))) for r in rows]},
                             indent=2) + "\n")
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _jsonable(v):
    # big counts go out as decimal strings so no reader rounds them
    if isinstance(v, int) and not isinstance(v, bool) and abs(v) > 2**53:
        return str(v)
    return v


def _tables(cfg: Config, ns: List[int], use_cache: bool = True) -> Dict[int, CensusTable]:
    cache = CensusCache(cfg.cache_dir) if use_cache else None
    tables = {}
    for n in ns:
        tables[n] = census_range(cfg.q, n, n, cfg.workers, cache, cfg.enumeration_budget)[0]
    if cache is not None:
        log.info("cache hits=%d misses=%d", cache.hits, cache.misses)
    return tables


def cmd_census(args, cfg: Config, out) -> int:
    cache = CensusCache(cfg.cache_dir)
    ns = args.n
    tables = census_range(cfg.q, min(ns), max(ns), cfg.workers, cache,
                          cfg.enumeration_budget) if ns else []
    rows = [[t.n, t.closed_total, t.privileged_total] for t in tables]
    _emit_rows(["n", "closed", "privileged"], rows, cfg.output_format, out)
    print(f"cache hits={cache.hits} misses={cache.misses}", file=sys.stderr)
    return 0


def _pattern(text: str, q: int, parser) -> tuple:
    try:
        w = parse_word(text, q)
    except ValueError as exc:
        parser.error(str(exc))
    if not w:
        parser.error("pattern must be non-empty")
    return w


def cmd_avoid(args, cfg: Config, out, parser) -> int:
    w = _pattern(args.w, cfg.q, parser)
    if args.n < 0:
        parser.error("--n must be >= 0")
    count = avoidance_count(cfg.q, w, args.n)
    if not args.bound:
        out.write(f"{count}\n")
        return 0
    bound = mu_upper_lemma1(cfg.q, args.n, len(w))
    ok = count <= bound
    out.write(f"avoid={count} lemma1={bound} {'ok' if ok else 'VIOLATED'}\n")
    return 0 if ok else 1


def cmd_mu(args, cfg: Config, out, parser) -> int:
    if args.n < 0 or args.m < 1:
        parser.error("need --n >= 0 and --m >= 1")
    mu, witness = mu_with_witness(cfg.q, args.n, args.m, cfg.mu_scan_budget)
    parts = [f"mu={mu}"]
    ok = True
    if args.bound:
        bound = mu_upper_lemma1(cfg.q, args.n, args.m)
        ok = mu <= bound
        parts += [f"lemma1={bound}", "ok" if ok else "VIOLATED"]
    if args.witness:
        parts.append(f"witness={render_word(witness, cfg.q)}")
    out.write(" ".join(parts) + "\n")
    return 0 if ok else 1


def verify_rows(cfg: Config, tables: Dict[int, CensusTable]) -> List[list]:
    """One row per check: check, n, m, lhs, rhs, status.  lhs <= rhs passes
    (equality for the partition check)."""
    q = cfg.q
    rows = []

    def add(check, n, m, lhs, rhs, ok):
        rows.append([check, n, "" if m is None else m, lhs, rhs, "PASS" if ok else "FAIL"])

    for n in sorted(tables):
        t = tables[n]
        parts = sum(t.closed_by_border.values())
        add("partition", n, None, parts, t.closed_total, parts == t.closed_total)
        add("subset", n, None, t.privileged_total, t.closed_total,
            t.privileged_total <= t.closed_total)
        for m in range(1, min(n, LEMMA1_MAX_PATTERN) + 1):
            if q**m > cfg.mu_scan_budget:
                break
            mu = bd.mu_exact(q, n, m, cfg.mu_scan_budget)
            bound = mu_upper_lemma1(q, n, m)
            add("lemma1", n, m, mu, bound, mu <= bound)
        for m in range(1, n):
            r = bd.lemma3_check(q, n, m, t, cfg.mu_scan_budget)
            add("lemma3", n, m, r.count, r.bound, r.passed)
        rhs = bd.eq1_rhs(q, n, cfg.mu_scan_budget)
        add("eq1", n, None, t.closed_total, rhs, t.closed_total <= rhs)
    return rows


def cmd_verify(args, cfg: Config, out) -> int:
    ns = list(range(args.n_min, args.n_max + 1))
    if args.n_min < 2:
        raise ValueError("verify needs --n-min >= 2")
    tables = _tables(cfg, ns, use_cache=not args.no_cache)
    if args.inject_fault and ns:
        n = ns[-1]
        t = tables[n]
        extra = cfg.q**n
        by_border = dict(t.closed_by_border)
        by_border[1] = by_border.get(1, 0) + extra
        tables[n] = CensusTable(t.q, n, t.closed_total + extra, t.privileged_total, by_border)
    rows = verify_rows(cfg, tables)
    if not args.suppress_timestamp:
        out.write(f"# generated {_dt.datetime.now().isoformat(timespec='seconds')}\n")
    _emit_rows(["check", "n", "m", "lhs", "rhs", "status"], rows, cfg.output_format, out)
    failed = sum(1 for r in rows if r[-1] == "FAIL")
    if cfg.output_format == "csv":
        out.write(f"# q={cfg.q} checks={len(rows)} failed={failed}\n")
    return 1 if failed else 0


def _formula_report(formula: str, cfg: Config, ns: List[int], kappa: float,
                    tables: Optional[Dict[int, CensusTable]] = None) -> bd.BoundReport:
    q = cfg.q
    budget = cfg.mu_scan_budget
    ns2 = [n for n in ns if n >= 2]
    if formula == "prop2":
        return bd.prop2_report(ns2, q)
    if formula == "thm1":
        return bd.theorem1_report(q, [n for n in ns if n >= 1], budget=budget)
    if formula == "cor1":
        return bd.corollary1_report(q, ns2, budget=budget)
    if formula == "lemma4":
        return bd.lemma4_report(q, ns2, kappa)
    if formula == "prop3":
        return bd.prop3_report(q, ns2, budget)
    if tables is None:
        tables = {}
        cache = CensusCache(cfg.cache_dir)
        for n in ns2:
            t = cache.get(q, n)
            if t is None:
                raise bd.MissingCensusError(
                    f"no cached census for q={q} n={n}; run "
                    f"`closedwords census --q {q} --n {min(ns2)}..{max(ns2)}` first")
            tables[n] = t
    thm2, eq1, _ = bd.theorem2_report(q, tables, ns2, budget)
    return thm2 if formula == "thm2" else eq1


def _write_report(report: bd.BoundReport, path: Path, fmt: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.to_json() if fmt == "json" else report.to_csv(), encoding="utf-8")


def cmd_bounds(args, cfg: Config, out) -> int:
    kappa = args.kappa if args.kappa is not None else cfg.kappa
    report = _formula_report(args.formula, cfg, args.n, kappa)
    if not report.records:
        raise ValueError("no n in range is valid for this formula")
    path = args.out or cfg.cache_dir / f"report_{args.formula}_q{cfg.q}.{cfg.output_format}"
    _write_report(report, path, cfg.output_format)
    out.write(f"formula={args.formula} q={cfg.q} rows={len(report.records)} "
              f"c_star={report.c_star!r} argmax_n={report.argmax_n}\n")
    for note in report.notes:
        out.write(f"note: {note}\n")
    out.write(f"wrote {path}\n")
    return 0


def cmd_report(args, cfg: Config, out) -> int:
    kappa = args.kappa if args.kappa is not None else cfg.kappa
    ns2 = [n for n in args.n if n >= 2]
    tables = _tables(cfg, ns2)
    rows = []
    for formula in bd.FORMULAS:
        report = _formula_report(formula, cfg, args.n, kappa, tables)
        path = args.out_dir / f"{formula}_q{cfg.q}.{cfg.output_format}"
        _write_report(report, path, cfg.output_format)
        rows.append([formula, cfg.q, len(report.records), repr(report.c_star),
                     report.argmax_n, str(path)])
    if not args.suppress_timestamp:
        out.write(f"# generated {_dt.datetime.now().isoformat(timespec='seconds')}\n")
    _emit_rows(["formula", "q", "rows", "c_star", "argmax_n", "file"], rows, "csv", out)
    return 0


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = resolve_config(args)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    try:
        if args.command == "census":
            return cmd_census(args, cfg, out)
        if args.command == "avoid":
            return cmd_avoid(args, cfg, out, parser)
        if args.command == "mu":
            return cmd_mu(args, cfg, out, parser)
        if args.command == "verify":
            return cmd_verify(args, cfg, out)
        if args.command == "bounds":
            return cmd_bounds(args, cfg, out)
        return cmd_report(args, cfg, out)
    except (BudgetExceededError, bd.MissingCensusError, CensusFileError,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
