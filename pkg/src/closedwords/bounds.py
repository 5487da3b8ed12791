"""Asymptotic bound machinery for closed-word counts.

Real-valued quantities are evaluated in the natural-log domain so that
nothing overflows at large n.  Inequalities between integers (the block
bound, the C(n, m) bounds, the full decomposition sum) are checked exactly
with Python ints.

Notation used below, for an alphabet of q letters:

* ``omega(q, n) = (ln n - ln ln n) / ln q``
* ``h(q, n) = floor(ln n / ln q)``, computed exactly as an integer log
* ``h_bar(q, n, kappa) = max(1, floor(omega / kappa))``
* ``pi_default(q, n) = max(1, floor(omega))``, a non-decreasing short
  length below the omega envelope
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from closedwords.avoidance import (
    DEFAULT_MU_SCAN_BUDGET,
    BudgetExceededError,
    mu_exact,
    mu_upper_lemma1,
)
from closedwords.census import CensusTable
from closedwords.word_core import check_alphabet

FORMULAS = ("prop2", "thm1", "cor1", "lemma4", "prop3", "thm2", "eq1")

PiFunction = Union[int, Callable[[int], int]]


class MissingCensusError(LookupError):
    pass


@dataclass(frozen=True)
class AsymptoticParams:
    q: int
    kappa: float = 2.0

    def __post_init__(self):
        check_alphabet(self.q)
        if not self.kappa > 1:
            raise ValueError(f"kappa must be > 1, got {self.kappa}")

    @property
    def beta(self) -> float:
        return 1.0 / math.log(self.q)


def _ln_q(q) -> float:
    # q is normally an int alphabet size; a float is accepted for unit checks
    return math.log(q)


def omega(q, n: int) -> float:
    if n <= 1:
        raise ValueError(f"omega needs n >= 2, got {n}")
    ln_n = math.log(n)
    return (ln_n - math.log(ln_n)) / _ln_q(q)


def h(q: int, n: int) -> int:
    """``floor(log_q n)``, exact."""
    check_alphabet(q)
    if n < 1:
        raise ValueError(f"h needs n >= 1, got {n}")
    k, p = 0, q
    while p <= n:
        k += 1
        p *= q
    return k


def h_bar(q: int, n: int, kappa: float = 2.0) -> int:
    if not kappa > 1:
        raise ValueError(f"kappa must be > 1, got {kappa}")
    if n == 1:
        return 1
    return max(1, math.floor(omega(q, n) / kappa))


def pi_default(q: int, n: int) -> int:
    if n < 1:
        raise ValueError(f"pi needs n >= 1, got {n}")
    if n == 1:
        return 1
    return max(1, math.floor(omega(q, n)))


def check_pi_member(pi: Callable[[int], int], q: int, ns: Iterable[int]) -> bool:
    """True if ``pi`` stays in ``[1, max(1, omega)]`` and never decreases on ``ns``."""
    prev = None
    for n in sorted(ns):
        v = pi(n)
        ceiling = 1.0 if n == 1 else max(1.0, omega(q, n))
        if not 1 <= v <= ceiling:
            return False
        if prev is not None and v < prev:
            return False
        prev = v
    return True


def _resolve_pi(pi: Optional[PiFunction], q: int, n: int) -> int:
    if pi is None:
        return pi_default(q, n)
    if callable(pi):
        return pi(n)
    return int(pi)


def prop2_log_value(n: int) -> float:
    if n < 2:
        raise ValueError(f"sequence defined for n >= 2, got {n}")
    ln_n = math.log(n)
    return ln_n + n * math.log1p(-ln_n / n)


def prop2_value(n: int) -> float:
    """``n * (1 - ln n / n) ** n``, evaluated as exp(ln n + n*log1p(-ln n / n)).

    Numerically the sequence tends to 1; it stays below e throughout.
    """
    return math.exp(prop2_log_value(n))


def theorem1_ratio(q: int, n: int, pi: Optional[PiFunction] = None,
                   budget: int = DEFAULT_MU_SCAN_BUDGET) -> float:
    """``mu(n, pi(n)) / q^(n - ln n / ln q)``, which equals ``n * mu / q^n``."""
    m = _resolve_pi(pi, q, n)
    mu = mu_exact(q, n, m, budget)
    return math.exp(math.log(mu) + math.log(n) - n * math.log(q))


def corollary1_log_ratio(q: int, n: int, pi_bar: Optional[PiFunction] = None,
                         budget: int = DEFAULT_MU_SCAN_BUDGET) -> float:
    m = _resolve_pi(pi_bar, q, n)
    reduced = n - 2 * m
    if reduced < 0:
        raise ValueError(f"n - 2*pi_bar(n) = {reduced} is negative")
    mu = mu_exact(q, reduced, m, budget)
    return math.log(mu) - (n - h(q, n)) * math.log(q)


def corollary1_ratio(q: int, n: int, pi_bar: Optional[PiFunction] = None,
                     pi: Optional[PiFunction] = None,
                     budget: int = DEFAULT_MU_SCAN_BUDGET) -> float:
    """``mu(n - 2 pi_bar(n), pi_bar(n)) / q^(n - h(n))``.

    ``pi`` is only used to check ``pi_bar(n) <= pi(n)``.
    """
    if pi is not None and _resolve_pi(pi_bar, q, n) > _resolve_pi(pi, q, n):
        raise ValueError("pi_bar(n) must not exceed pi(n)")
    return math.exp(corollary1_log_ratio(q, n, pi_bar, budget))


@dataclass(frozen=True)
class Lemma3Result:
    q: int
    n: int
    m: int
    branch: str  # "overlap" when 2m > n, "avoid" otherwise
    count: int
    bound: int

    @property
    def passed(self) -> bool:
        return self.count <= self.bound


def lemma3_bound(q: int, n: int, m: int, budget: int = DEFAULT_MU_SCAN_BUDGET) -> int:
    if 2 * m > n:
        return q ** ((n + 1) // 2)
    return q**m * mu_exact(q, n - 2 * m, m, budget)


def lemma3_check(q: int, n: int, m: int, census: Optional[CensusTable],
                 budget: int = DEFAULT_MU_SCAN_BUDGET) -> Lemma3Result:
    if census is None or (census.q, census.n) != (q, n):
        raise MissingCensusError(f"no census for q={q} n={n}")
    if not 1 <= m <= n - 1:
        raise ValueError(f"border length must lie in [1, n-1], got {m}")
    branch = "overlap" if 2 * m > n else "avoid"
    return Lemma3Result(q, n, m, branch, census.closed_by_border.get(m, 0),
                        lemma3_bound(q, n, m, budget))


def lemma4_log_ratio(q: int, n: int, kappa: float = 2.0) -> float:
    return ((h_bar(q, n, kappa) - h(q, n)) * math.log(q)
            - (1.0 / kappa - 1.0) * math.log(n))


def lemma4_ratio(q: int, n: int, kappa: float = 2.0) -> float:
    """``q^(h_bar(n) - h(n)) / q^((1/kappa - 1) ln n / ln q)``."""
    if n < 2:
        raise ValueError(f"lemma4 ratio needs n >= 2, got {n}")
    return math.exp(lemma4_log_ratio(q, n, kappa))


def lemma4_sweep(q: int, n_values: Sequence[int], kappa: float = 2.0) -> np.ndarray:
    """Vectorized ``lemma4_ratio`` over many n (all >= 2)."""
    check_alphabet(q)
    ns = np.asarray(n_values, dtype=np.int64)
    if ns.size and ns.min() < 2:
        raise ValueError("lemma4 ratio needs n >= 2")
    ln_n = np.log(ns.astype(np.float64))
    ln_q = math.log(q)
    top = int(ns.max()) if ns.size else 1
    powers = [1]
    while powers[-1] <= top:
        powers.append(powers[-1] * q)
    # exact floor(log_q n): index of the last power <= n
    hs = np.searchsorted(np.asarray(powers, dtype=np.int64), ns, side="right") - 1
    omegas = (ln_n - np.log(ln_n)) / ln_q
    hbars = np.maximum(1, np.floor(omegas / kappa)).astype(np.int64)
    return np.exp((hbars - hs) * ln_q - (1.0 / kappa - 1.0) * ln_n)


@dataclass(frozen=True)
class Prop3Sides:
    q: int
    n: int
    lhs: int
    shape_log: float  # ln(ln n * q^n / sqrt n)
    substituted: tuple = ()  # border lengths where the block bound replaced mu

    @property
    def ratio(self) -> float:
        return math.exp(math.log(self.lhs) - self.shape_log)


def theorem2_shape_log(q: int, n: int) -> float:
    """``ln(ln n * q^n / sqrt n)``."""
    if n < 2:
        raise ValueError(f"bound shape needs n >= 2, got {n}")
    return math.log(math.log(n)) + n * math.log(q) - 0.5 * math.log(n)


def short_border_sum(q: int, n: int, budget: int = DEFAULT_MU_SCAN_BUDGET):
    """``sum_{m=1}^{n//2} q^m mu(n - 2m, m)`` and the m where mu was replaced.

    When ``q^m`` is over the scan budget the block bound stands in for mu,
    which can only make the sum larger.
    """
    total = 0
    substituted = []
    for m in range(1, n // 2 + 1):
        try:
            mu = mu_exact(q, n - 2 * m, m, budget)
        except BudgetExceededError:
            mu = mu_upper_lemma1(q, n - 2 * m, m)
            substituted.append(m)
        total += q**m * mu
    return total, tuple(substituted)


def prop3_sides(q: int, n: int, budget: int = DEFAULT_MU_SCAN_BUDGET) -> Prop3Sides:
    lhs, substituted = short_border_sum(q, n, budget)
    return Prop3Sides(q, n, lhs, theorem2_shape_log(q, n), substituted)


def eq1_rhs(q: int, n: int, budget: int = DEFAULT_MU_SCAN_BUDGET) -> int:
    """Exact upper bound for C(n): short-border sum plus the overlap tail
    ``sum_{m=n//2+1}^{n-1} q^ceil(n/2)``."""
    if n < 2:
        raise ValueError(f"decomposition needs n >= 2, got {n}")
    short, _ = short_border_sum(q, n, budget)
    tail = (n - 1 - n // 2) * q ** ((n + 1) // 2)
    return short + tail


def theorem2_ratio(q: int, n: int, closed_total: int) -> float:
    return math.exp(math.log(closed_total) - theorem2_shape_log(q, n))


# -- reports ------------------------------------------------------------------

@dataclass(frozen=True)
class BoundRecord:
    q: int
    n: int
    exact_count: Optional[int]
    bound_log: float
    ratio: float
    formula_id: str


@dataclass
class BoundReport:
    q: int
    formula_id: str
    records: List[BoundRecord] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def c_star(self) -> float:
        return max(r.ratio for r in self.records)

    @property
    def argmax_n(self) -> int:
        best = self.c_star
        return next(r.n for r in self.records if r.ratio == best)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["q", "n", "exact_count", "bound_log", "ratio", "formula_id"])
        for r in self.records:
            writer.writerow([r.q, r.n, "" if r.exact_count is None else r.exact_count,
                             repr(r.bound_log), repr(r.ratio), r.formula_id])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = []
        for r in self.records:
            row = asdict(r)
            if r.exact_count is not None:
                # decimal string keeps counts above 2**53 exact
                row["exact_count"] = str(r.exact_count)
            rows.append(row)
        return json.dumps({
            "q": self.q,
            "formula_id": self.formula_id,
            "c_star": self.c_star,
            "argmax_n": self.argmax_n,
            "notes": self.notes,
            "rows": rows,
        }, indent=2) + "\n"


PROP2_NOTE = ("measured n(1 - ln n / n)^n approaches 1, not e; only the "
              "bound by e is used downstream")


def prop2_report(ns: Iterable[int], q: int = 0) -> BoundReport:
    """The sequence does not depend on q; ``q`` only labels the rows."""
    report = BoundReport(q, "prop2", notes=[PROP2_NOTE])
    for n in ns:
        lv = prop2_log_value(n)
        report.records.append(BoundRecord(q, n, None, lv, math.exp(lv), "prop2"))
    return report


def theorem1_report(q: int, ns: Iterable[int], pi: Optional[PiFunction] = None,
                    budget: int = DEFAULT_MU_SCAN_BUDGET) -> BoundReport:
    report = BoundReport(q, "thm1")
    for n in ns:
        m = _resolve_pi(pi, q, n)
        mu = mu_exact(q, n, m, budget)
        bound_log = n * math.log(q) - math.log(n)
        report.records.append(BoundRecord(q, n, mu, bound_log,
                                          theorem1_ratio(q, n, m, budget), "thm1"))
    return report


def corollary1_report(q: int, ns: Iterable[int], pi_bar: Optional[PiFunction] = None,
                      budget: int = DEFAULT_MU_SCAN_BUDGET) -> BoundReport:
    report = BoundReport(q, "cor1")
    for n in ns:
        m = _resolve_pi(pi_bar, q, n)
        if n - 2 * m < 0:
            continue
        mu = mu_exact(q, n - 2 * m, m, budget)
        bound_log = (n - h(q, n)) * math.log(q)
        report.records.append(BoundRecord(
            q, n, mu, bound_log, math.exp(math.log(mu) - bound_log), "cor1"))
    return report


def lemma4_report(q: int, ns: Sequence[int], kappa: float = 2.0) -> BoundReport:
    ns = list(ns)
    ratios = lemma4_sweep(q, ns, kappa)
    report = BoundReport(q, "lemma4", notes=[f"kappa={kappa!r}"])
    for n, r in zip(ns, ratios.tolist()):
        report.records.append(BoundRecord(
            q, n, None, (1.0 / kappa - 1.0) * math.log(n), r, "lemma4"))
    return report


def prop3_report(q: int, ns: Iterable[int],
                 budget: int = DEFAULT_MU_SCAN_BUDGET) -> BoundReport:
    report = BoundReport(q, "prop3")
    for n in ns:
        sides = prop3_sides(q, n, budget)
        if sides.substituted:
            report.notes.append(
                f"n={n}: block bound used for mu at m={list(sides.substituted)}")
        report.records.append(BoundRecord(q, n, sides.lhs, sides.shape_log,
                                          sides.ratio, "prop3"))
    return report


@dataclass(frozen=True)
class Eq1Check:
    n: int
    closed_total: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.closed_total <= self.rhs


def theorem2_report(q: int, tables: Dict[int, CensusTable], ns: Iterable[int],
                    budget: int = DEFAULT_MU_SCAN_BUDGET):
    """Ratios ``C(n) sqrt(n) / (q^n ln n)`` plus the exact decomposition check.

    Returns ``(report, eq1_report, checks)``.
    """
    report = BoundReport(q, "thm2")
    eq1 = BoundReport(q, "eq1")
    checks = []
    for n in ns:
        table = tables.get(n)
        if table is None:
            raise MissingCensusError(f"no census for q={q} n={n}")
        c = table.closed_total
        report.records.append(BoundRecord(q, n, c, theorem2_shape_log(q, n),
                                          theorem2_ratio(q, n, c), "thm2"))
        rhs = eq1_rhs(q, n, budget)
        checks.append(Eq1Check(n, c, rhs))
        eq1.records.append(BoundRecord(q, n, c, math.log(rhs),
                                       math.exp(math.log(c) - math.log(rhs)), "eq1"))
    return report, eq1, checks
