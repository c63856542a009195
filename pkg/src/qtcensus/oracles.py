"""Languages of binary words, queried through a single oracle type."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import automata
from .errors import OutOfDomainError, OverflowDomainError
from .numtheory import WINDOW_HI_MAX, Kind, is_prime, is_squarefree, sieve_window
from .words import BitWord


class OracleKind(enum.Enum):
    PRIMES = "primes"
    SQUAREFREE = "squarefree"
    AUTOMATON = "automaton"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class LanguageOracle:
    """Membership test for a language of LSB-first binary words.

    PRIMES, SQUAREFREE and EXPLICIT depend only on the value of a word, so
    trailing zeros never change the answer.  AUTOMATON runs the automaton on
    the word itself.  EXPLICIT holds a finite set of integers and refuses to
    answer at or above ``cutoff``.
    """

    kind: OracleKind
    automaton: automata.AlternatingAutomaton | None = None
    members: frozenset[int] = frozenset()
    cutoff: int | None = None

    @classmethod
    def primes(cls):
        return cls(OracleKind.PRIMES)

    @classmethod
    def squarefree(cls):
        return cls(OracleKind.SQUAREFREE)

    @classmethod
    def from_automaton(cls, aut):
        return cls(OracleKind.AUTOMATON, automaton=aut)

    @classmethod
    def explicit(cls, members, cutoff: int):
        members = frozenset(int(m) for m in members)
        if any(m < 0 or m >= cutoff for m in members):
            raise ValueError("explicit members must lie in [0, cutoff)")
        return cls(OracleKind.EXPLICIT, members=members, cutoff=cutoff)

    @classmethod
    def named(cls, name: str):
        kind = OracleKind(name)
        if kind is OracleKind.PRIMES:
            return cls.primes()
        if kind is OracleKind.SQUAREFREE:
            return cls.squarefree()
        raise ValueError(f"oracle {name!r} needs extra data")

    @property
    def value_based(self) -> bool:
        return self.kind is not OracleKind.AUTOMATON

    def label(self) -> str:
        return self.kind.value

    def contains_value(self, v: int) -> bool:
        if v < 0:
            raise OutOfDomainError(f"negative value {v}")
        if self.kind is OracleKind.PRIMES:
            return is_prime(v)
        if self.kind is OracleKind.SQUAREFREE:
            return is_squarefree(v)
        if self.kind is OracleKind.EXPLICIT:
            if v >= self.cutoff:
                raise OutOfDomainError(f"{v} is at or above the explicit cutoff {self.cutoff}")
            return v in self.members
        return automata.accepts(self.automaton, BitWord.from_int(v))

    def contains_word(self, word: BitWord) -> bool:
        if self.kind is OracleKind.AUTOMATON:
            return automata.accepts(self.automaton, word)
        return self.contains_value(word.value)

    __call__ = contains_word

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Boolean membership of every value in ``[lo, hi)`` (value-based kinds only)."""
        if self.kind is OracleKind.PRIMES:
            return sieve_window(Kind.PRIMES, lo, hi).bits
        if self.kind is OracleKind.SQUAREFREE:
            return sieve_window(Kind.SQUAREFREE, lo, hi).bits
        if self.kind is OracleKind.EXPLICIT:
            if hi > self.cutoff:
                raise OutOfDomainError(f"window end {hi} is above the explicit cutoff {self.cutoff}")
            bits = np.zeros(hi - lo, dtype=bool)
            inside = [m - lo for m in self.members if lo <= m < hi]
            bits[inside] = True
            return bits
        raise TypeError("automaton oracles are not value-based; use word_table()")

    def word_table(self, max_len: int) -> list:
        """``table[l][v]``: membership of the length-``l`` word with value ``v``."""
        if self.value_based:
            if (1 << max_len) > WINDOW_HI_MAX:
                raise OverflowDomainError("word table too long")
            full = self.window(0, 1 << max_len) if max_len else self.window(0, 1)
            return [full[: 1 << length] for length in range(max_len + 1)]
        start = self.automaton.start
        return [[start in acc for acc in row] for row in automata.acceptance_table(self.automaton, max_len)]


PRIMES = LanguageOracle.primes()
SQUAREFREE = LanguageOracle.squarefree()
UNIVERSAL = LanguageOracle.from_automaton(
    automata.AlternatingAutomaton.deterministic(["s0"], "s0", ["s0"], {("s0", 0): "s0", ("s0", 1): "s0"})
)
