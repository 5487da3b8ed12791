"""Words, borders, and the closed / privileged predicates.

A word is any finite sequence of hashable letters.  Internally the toolkit
uses tuples of ints in ``[0, q)``; plain strings such as ``"abab"`` work
everywhere a word is accepted, which keeps tests and the REPL readable.

Words of length 0 and 1 count as both closed and privileged.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

Word = Tuple[int, ...]

LETTERS = string.ascii_lowercase


@dataclass(frozen=True)
class Alphabet:
    """The letters ``0 .. q-1``."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or self.q < 2:
            raise ValueError(f"alphabet size must be an integer >= 2, got {self.q!r}")

    def __len__(self):
        return self.q

    def words(self, n: int) -> Iterator[Word]:
        """All q**n words of length n in lexicographic (radix-q) order."""
        return itertools.product(range(self.q), repeat=n)

    def contains(self, word: Sequence[int]) -> bool:
        return all(isinstance(a, int) and 0 <= a < self.q for a in word)


@dataclass(frozen=True)
class BorderProfile:
    word: Sequence
    border_lengths: Tuple[int, ...]
    maximal_border_length: int

    @property
    def has_border(self) -> bool:
        return self.maximal_border_length > 0


def check_alphabet(q: int) -> int:
    Alphabet(q)
    return q


def parse_word(text: str, q: int) -> Word:
    """Parse ``"abba"`` (q <= 26) or ``"0,1,1,0"`` into a tuple of letters.

    The empty string parses to the empty word.  Letters outside the alphabet
    raise ValueError.
    """
    check_alphabet(q)
    text = text.strip()
    if not text:
        return ()
    if "," in text or text.isdigit() and q > 26:
        letters = tuple(int(tok) for tok in text.split(","))
    else:
        try:
            letters = tuple(LETTERS.index(ch) for ch in text)
        except ValueError:
            raise ValueError(f"cannot parse word {text!r}") from None
    bad = [a for a in letters if not 0 <= a < q]
    if bad:
        raise ValueError(f"letters {bad} outside alphabet of size {q}")
    return letters


def render_word(word: Sequence[int], q: int) -> str:
    if q <= 26:
        return "".join(LETTERS[a] for a in word)
    return ",".join(str(a) for a in word)


def failure_function(u: Sequence) -> list:
    """``fail[k]`` is the length of the longest border of ``u[:k]``.

    ``fail[0]`` is 0 by convention.  Linear time.
    """
    n = len(u)
    fail = [0] * (n + 1)
    k = 0
    for i in range(1, n):
        while k and u[i] != u[k]:
            k = fail[k]
        if u[i] == u[k]:
            k += 1
        fail[i + 1] = k
    return fail


def border_chain(fail: Sequence[int], length: int) -> list:
    """Border lengths of the prefix of the given length, in ascending order."""
    chain = []
    b = fail[length] if length else 0
    while b:
        chain.append(b)
        b = fail[b]
    chain.reverse()
    return chain


def border_array(u: Sequence) -> BorderProfile:
    fail = failure_function(u)
    chain = tuple(border_chain(fail, len(u)))
    return BorderProfile(u, chain, chain[-1] if chain else 0)


def count_occurrences(u: Sequence, w: Sequence) -> int:
    """Number of (possibly overlapping) occurrences of ``w`` in ``u``."""
    m = len(w)
    if m == 0:
        raise ValueError("pattern must be non-empty")
    fail = failure_function(w)
    count = 0
    k = 0
    for a in u:
        while k and (k == m or a != w[k]):
            k = fail[k]
        if a == w[k]:
            k += 1
            if k == m:
                count += 1
    return count


def maximal_border(u: Sequence) -> Optional[Sequence]:
    m = failure_function(u)[len(u)] if u else 0
    return u[:m] if m else None


def is_closed(u: Sequence) -> bool:
    if len(u) <= 1:
        return True
    w = maximal_border(u)
    return w is not None and count_occurrences(u, w) == 2


def is_privileged(u: Sequence) -> bool:
    """Recursive privileged test, memoized along the border chain of ``u``.

    Every border of ``u`` is a prefix of ``u``, so the whole recursion only
    ever looks at prefixes whose lengths lie on border chains, and one
    failure array serves all of them.
    """
    fail = failure_function(u)
    memo = {}

    def privileged(length: int) -> bool:
        if length <= 1:
            return True
        if length in memo:
            return memo[length]
        prefix = u[:length]
        result = any(
            privileged(b) and count_occurrences(prefix, u[:b]) == 2
            for b in border_chain(fail, length)
        )
        memo[length] = result
        return result

    return privileged(len(u))


def canonical_form(u: Sequence) -> Sequence:
    """Rename letters to 0, 1, 2, ... in order of first occurrence.

    Strings map onto ``"abc..."`` and keep their type; other sequences
    come back as tuples of ints.
    """
    names = {}
    out = []
    for a in u:
        if a not in names:
            names[a] = len(names)
        out.append(names[a])
    if isinstance(u, str):
        return "".join(LETTERS[i] for i in out)
    return tuple(out)


def canonical_words(q: int, m: int) -> Iterator[Word]:
    """Words of length m over q letters that are their own canonical form.

    These are the restricted growth strings: each letter is at most one more
    than the largest letter seen before it.  Each orbit of the letter
    permutation group has exactly one such representative.
    """
    check_alphabet(q)
    if m == 0:
        yield ()
        return
    word = [0] * m

    def extend(i: int, top: int):
        if i == m:
            yield tuple(word)
            return
        for a in range(min(top + 2, q)):
            word[i] = a
            yield from extend(i + 1, max(top, a))

    yield from extend(1, 0)
