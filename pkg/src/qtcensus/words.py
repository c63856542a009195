"""Binary words with least-significant-bit-first integer semantics.

The first symbol of a word is read first and is the least significant bit, so
``value(u + w) == value(u) + 2**len(u) * value(w)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True, slots=True)
class BitWord:
    bits: tuple[int, ...] = ()

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"bits must be 0/1, got {self.bits!r}")

    @classmethod
    def from_int(cls, value: int, length: int | None = None) -> BitWord:
        """Encode ``value``; with ``length=None`` the minimal word is used (empty for 0)."""
        if value < 0:
            raise ValueError("value must be nonnegative")
        if length is None:
            length = value.bit_length()
        elif value >> length:
            raise ValueError(f"{value} does not fit in {length} bits")
        return cls(tuple((value >> i) & 1 for i in range(length)))

    @classmethod
    def parse(cls, text: str) -> BitWord:
        """Parse a word written in reading order, e.g. ``"01"`` has value 2."""
        text = text.strip()
        if text in ("", "eps", "ε"):
            return cls()
        return cls(tuple(int(c) for c in text))

    @property
    def value(self) -> int:
        v = 0
        for i, b in enumerate(self.bits):
            v |= b << i
        return v

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    def __add__(self, other: BitWord) -> BitWord:
        return BitWord(self.bits + other.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits)) or "eps"


def all_words(max_len: int, min_len: int = 0) -> Iterable[BitWord]:
    """Every word with ``min_len <= len <= max_len``, shortest first, by value."""
    for length in range(min_len, max_len + 1):
        for v in range(1 << length):
            yield BitWord.from_int(v, length)
