"""Enumeration and bound-checking toolkit for closed and privileged words."""

from closedwords.word_core import (
    Alphabet,
    BorderProfile,
    border_array,
    canonical_form,
    count_occurrences,
    failure_function,
    is_closed,
    is_privileged,
    maximal_border,
    parse_word,
    render_word,
)
from closedwords.avoidance import (
    BudgetExceededError,
    FactorAutomaton,
    avoidance_count,
    brute_force_avoidance,
    mu_exact,
    mu_upper_lemma1,
)
from closedwords.census import CensusTable, census_range, run_census

__all__ = [
    "Alphabet",
    "BorderProfile",
    "BudgetExceededError",
    "CensusTable",
    "FactorAutomaton",
    "avoidance_count",
    "border_array",
    "brute_force_avoidance",
    "canonical_form",
    "census_range",
    "count_occurrences",
    "failure_function",
    "is_closed",
    "is_privileged",
    "maximal_border",
    "mu_exact",
    "mu_upper_lemma1",
    "parse_word",
    "render_word",
    "run_census",
]

__version__ = "0.1.0"
