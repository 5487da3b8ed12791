"""Exact counts of words avoiding a single factor.

``avoidance_count(q, w, n)`` is the number of length-n words over q letters
with no occurrence of ``w``.  It runs a dynamic program over the states of
the pattern's KMP automaton.  ``mu_exact`` maximizes it over all patterns
of a given length, and ``mu_upper_lemma1`` is the block-counting bound
``(q^m - 1)^(n // m) * q^(n % m)``.

All counts are Python ints and never rounded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

from closedwords.word_core import canonical_words, check_alphabet, failure_function

DEFAULT_MU_SCAN_BUDGET = 2**20
DEFAULT_ENUMERATION_BUDGET = 2**34


class BudgetExceededError(ValueError):
    """A requested scan would exceed its configured size budget."""


@dataclass(frozen=True)
class FactorAutomaton:
    """KMP automaton of one pattern.

    State ``s`` means the longest suffix of the text read so far that is a
    prefix of the pattern has length ``s``.  Reaching state ``m`` means the
    pattern occurred; avoidance counting never leaves that state.
    """

    pattern: Tuple[int, ...]
    q: int
    transitions: Tuple[Tuple[int, ...], ...]

    @property
    def accepting_state(self) -> int:
        return len(self.pattern)

    @classmethod
    def build(cls, w: Sequence[int], q: int) -> "FactorAutomaton":
        check_alphabet(q)
        w = tuple(w)
        m = len(w)
        if m == 0:
            raise ValueError("pattern must be non-empty")
        if any(not 0 <= a < q for a in w):
            raise ValueError(f"pattern {w} has letters outside alphabet of size {q}")
        fail = failure_function(w)
        table = []
        for s in range(m + 1):
            row = []
            for a in range(q):
                if s < m and w[s] == a:
                    row.append(s + 1)
                elif s == 0:
                    row.append(0)
                else:
                    # same move as from the longest proper border
                    row.append(table[fail[s]][a])
            table.append(tuple(row))
        return cls(w, q, tuple(table))

    def step(self, state: int, letter: int) -> int:
        return self.transitions[state][letter]

    def count_avoiding(self, n: int) -> int:
        return self.counts_up_to(n)[-1]

    def counts_up_to(self, n: int) -> list:
        """Avoidance counts for every length 0..n in one pass."""
        if n < 0:
            raise ValueError(f"length must be >= 0, got {n}")
        m = len(self.pattern)
        counts = [0] * m
        counts[0] = 1
        live = self.transitions[:m]
        totals = [1]
        for _ in range(n):
            nxt = [0] * m
            for s, c in enumerate(counts):
                if c:
                    for t in live[s]:
                        if t < m:
                            nxt[t] += c
            counts = nxt
            totals.append(sum(counts))
        return totals


def avoidance_count(q: int, w: Sequence[int], n: int) -> int:
    """Exact number of length-``n`` words over ``q`` letters avoiding ``w``."""
    return FactorAutomaton.build(w, q).count_avoiding(n)


def brute_force_avoidance(q: int, w: Sequence[int], n: int,
                          budget: int = DEFAULT_ENUMERATION_BUDGET) -> int:
    """Same count as ``avoidance_count`` by checking every word."""
    check_alphabet(q)
    w = tuple(w)
    if not w:
        raise ValueError("pattern must be non-empty")
    if n < 0:
        raise ValueError(f"length must be >= 0, got {n}")
    if q**n > budget:
        raise BudgetExceededError(f"{q}**{n} words exceeds enumeration budget {budget}")
    # one character per letter so the substring test runs in C
    letters = [chr(0x100 + a) for a in range(q)]
    needle = "".join(letters[a] for a in w)
    return sum(1 for t in itertools.product(letters, repeat=n)
               if needle not in "".join(t))


@lru_cache(maxsize=None)
def mu_with_witness(q: int, n: int, m: int,
                    budget: int = DEFAULT_MU_SCAN_BUDGET) -> Tuple[int, Tuple[int, ...]]:
    """Largest avoidance count over patterns of length m, with the first
    canonical pattern attaining it."""
    check_alphabet(q)
    if n < 0:
        raise ValueError(f"length must be >= 0, got {n}")
    if m < 1:
        raise ValueError(f"pattern length must be >= 1, got {m}")
    if q**m > budget:
        raise BudgetExceededError(f"{q}**{m} patterns exceeds mu scan budget {budget}")
    best, witness = -1, ()
    # counts are invariant under renaming letters, so canonical forms suffice
    for w in canonical_words(q, m):
        value = avoidance_count(q, w, n)
        if value > best:
            best, witness = value, w
    return best, witness


def mu_exact(q: int, n: int, m: int, budget: int = DEFAULT_MU_SCAN_BUDGET) -> int:
    return mu_with_witness(q, n, m, budget)[0]


def mu_upper_lemma1(q: int, n: int, m: int) -> int:
    """Integer form ``(q^m - 1)^(n // m) * q^(n % m)`` of the block bound."""
    check_alphabet(q)
    if n < 0:
        raise ValueError(f"length must be >= 0, got {n}")
    if m < 1:
        raise ValueError(f"pattern length must be >= 1, got {m}")
    return (q**m - 1) ** (n // m) * q ** (n % m)
