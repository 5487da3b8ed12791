"""Exhaustive census of closed and privileged words.

The scan walks the tree of all words depth first and extends the failure
function one letter at a time.  Two facts make each node O(1) amortized:

* a word of length >= 2 is closed iff its last failure value is strictly
  larger than every earlier one (an earlier value >= the maximal border
  length would put a third copy of the maximal border inside the word);
* only the maximal border can occur exactly twice, so a word of length
  >= 2 is privileged iff it is closed and its maximal border is.

The predicates in ``word_core`` stay the reference definitions; the tests
check this scan against them word by word.
"""

from __future__ import annotations

import hashlib
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from closedwords.avoidance import DEFAULT_ENUMERATION_BUDGET, BudgetExceededError
from closedwords.word_core import check_alphabet

log = logging.getLogger(__name__)


class CensusFileError(ValueError):
    """A cache file is malformed, corrupted, or describes another (q, n)."""


@dataclass
class CensusTable:
    q: int
    n: int
    closed_total: int = 0
    privileged_total: int = 0
    closed_by_border: Dict[int, int] = field(default_factory=dict)

    def partition_holds(self) -> bool:
        if self.n < 2:
            return not self.closed_by_border
        return sum(self.closed_by_border.values()) == self.closed_total

    def merge(self, other: "CensusTable") -> "CensusTable":
        if (self.q, self.n) != (other.q, other.n):
            raise ValueError("cannot merge tables for different (q, n)")
        by_border = dict(self.closed_by_border)
        for m, c in other.closed_by_border.items():
            by_border[m] = by_border.get(m, 0) + c
        return CensusTable(self.q, self.n,
                           self.closed_total + other.closed_total,
                           self.privileged_total + other.privileged_total,
                           dict(sorted(by_border.items())))


@dataclass(frozen=True)
class ShardSpec:
    """All words that start with the radix-q digits of ``prefix_rank``."""

    prefix_length: int
    prefix_rank: int

    def prefix(self, q: int) -> Tuple[int, ...]:
        digits = []
        r = self.prefix_rank
        for _ in range(self.prefix_length):
            r, d = divmod(r, q)
            digits.append(d)
        return tuple(reversed(digits))


def shard_prefix_length(q: int, n: int, workers: int) -> int:
    p = 0
    while q**p < 64 * workers:
        p += 1
    return min(p, n)


def make_shards(q: int, n: int, workers: int) -> List[ShardSpec]:
    p = shard_prefix_length(q, n, workers)
    return [ShardSpec(p, r) for r in range(q**p)]


def _scan(q: int, n: int, prefix: Tuple[int, ...]) -> Tuple[int, int, Dict[int, int]]:
    """Tally closed / privileged words of length n that start with ``prefix``."""
    u = [0] * (n + 1)
    fail = [0] * (n + 1)
    # runmax[k] = max(fail[1..k]); priv[k] = prefix of length k is privileged
    runmax = [0] * (n + 1)
    priv = [True] * (n + 1)
    by_border = [0] * (n + 1)
    closed_privileged = [0, 0]

    def push(k: int, a: int) -> None:
        # set u[k] = a and derive fail/runmax/priv for the prefix of length k+1
        u[k] = a
        if k == 0:
            f = 0
        else:
            f = fail[k]
            while f and u[f] != a:
                f = fail[f]
            if u[f] == a:
                f += 1
        fail[k + 1] = f
        prev = runmax[k]
        runmax[k + 1] = f if f > prev else prev
        priv[k + 1] = k == 0 or (f > prev and priv[f])

    for k, a in enumerate(prefix):
        push(k, a)

    def leaf() -> None:
        f = fail[n]
        if n <= 1:
            closed_privileged[0] += 1
            closed_privileged[1] += 1
        elif f > runmax[n - 1]:
            closed_privileged[0] += 1
            by_border[f] += 1
            if priv[f]:
                closed_privileged[1] += 1

    def walk(k: int) -> None:
        if k == n:
            leaf()
            return
        if k == n - 1 and k > 0:
            # last letter inline: no deeper prefix state is needed
            fk = fail[k]
            prev = runmax[k]
            for a in range(q):
                f = fk
                while f and u[f] != a:
                    f = fail[f]
                if u[f] == a:
                    f += 1
                if f > prev:
                    closed_privileged[0] += 1
                    by_border[f] += 1
                    if priv[f]:
                        closed_privileged[1] += 1
            return
        for a in range(q):
            push(k, a)
            walk(k + 1)

    walk(len(prefix))
    return (closed_privileged[0], closed_privileged[1],
            {m: c for m, c in enumerate(by_border) if c})


def _scan_shard(args) -> CensusTable:
    q, n, shard = args
    closed, privileged, by_border = _scan(q, n, shard.prefix(q))
    return CensusTable(q, n, closed, privileged, by_border)


def run_census(q: int, n: int, workers: int = 1,
               budget: int = DEFAULT_ENUMERATION_BUDGET) -> CensusTable:
    """Exact C(n), B(n) and C(n, m) by scanning every word of length n.

    The result does not depend on ``workers``; shards are merged by
    addition.
    """
    check_alphabet(q)
    if n < 0:
        raise ValueError(f"length must be >= 0, got {n}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if q**n > budget:
        raise BudgetExceededError(f"{q}**{n} words exceeds enumeration budget {budget}")
    shards = make_shards(q, n, workers)
    jobs = [(q, n, s) for s in shards]
    if workers == 1:
        parts = map(_scan_shard, jobs)
        return _merge_all(q, n, parts)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return _merge_all(q, n, pool.map(_scan_shard, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def _merge_all(q, n, parts) -> CensusTable:
    table = CensusTable(q, n)
    for part in parts:
        table = table.merge(part)
    return table


# -- persistence --------------------------------------------------------------

def _body_lines(table: CensusTable) -> List[str]:
    lines = [f"closed_total={table.closed_total}",
             f"privileged_total={table.privileged_total}"]
    lines += [f"m={m} count={c}" for m, c in sorted(table.closed_by_border.items()) if c]
    return lines


def _checksum(lines: Sequence[str]) -> str:
    return hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()


def save_census(path, table: CensusTable) -> Path:
    path = Path(path)
    body = _body_lines(table)
    header = f"q={table.q} n={table.n} checksum={_checksum(body)}"
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text("\n".join([header] + body) + "\n", encoding="utf-8")
    os.replace(tmp, path)
    return path


def _parse_fields(line: str, keys: Sequence[str]) -> Dict[str, str]:
    parts = dict(tok.split("=", 1) for tok in line.split() if "=" in tok)
    if sorted(parts) != sorted(keys):
        raise CensusFileError(f"malformed line {line!r}")
    return parts


def load_census(path, q: Optional[int] = None, n: Optional[int] = None) -> CensusTable:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if len(lines) < 3:
        raise CensusFileError(f"{path}: truncated census file")
    try:
        head = _parse_fields(lines[0], ["q", "n", "checksum"])
        file_q, file_n = int(head["q"]), int(head["n"])
        body = lines[1:]
        if _checksum(body) != head["checksum"]:
            raise CensusFileError(f"{path}: checksum mismatch")
        closed = int(_parse_fields(body[0], ["closed_total"])["closed_total"])
        privileged = int(_parse_fields(body[1], ["privileged_total"])["privileged_total"])
        by_border = {}
        for line in body[2:]:
            f = _parse_fields(line, ["m", "count"])
            by_border[int(f["m"])] = int(f["count"])
    except (KeyError, ValueError) as exc:
        if isinstance(exc, CensusFileError):
            raise
        raise CensusFileError(f"{path}: {exc}") from exc
    if q is not None and file_q != q:
        raise CensusFileError(f"{path}: file has q={file_q}, expected q={q}")
    if n is not None and file_n != n:
        raise CensusFileError(f"{path}: file has n={file_n}, expected n={n}")
    return CensusTable(file_q, file_n, closed, privileged, by_border)


class CensusCache:
    """One file per (q, n) under ``directory``; counts hits and misses."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.hits = 0
        self.misses = 0

    def path(self, q: int, n: int) -> Path:
        return self.directory / f"census_q{q}_n{n}.txt"

    def get(self, q: int, n: int) -> Optional[CensusTable]:
        p = self.path(q, n)
        if not p.exists():
            return None
        return load_census(p, q, n)

    def put(self, table: CensusTable) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        save_census(self.path(table.q, table.n), table)


def census_range(q: int, n_min: int, n_max: int, workers: int = 1,
                 cache: Optional[CensusCache] = None,
                 budget: int = DEFAULT_ENUMERATION_BUDGET) -> List[CensusTable]:
    tables = []
    for n in range(n_min, n_max + 1):
        table = cache.get(q, n) if cache is not None else None
        if table is not None:
            cache.hits += 1
        else:
            table = run_census(q, n, workers, budget)
            if cache is not None:
                cache.misses += 1
                cache.put(table)
            log.info("census q=%d n=%d: C=%d B=%d", q, n, table.closed_total,
                     table.privileged_total)
        tables.append(table)
    return tables
