"""Primality and squarefreeness, pointwise and over sieve windows."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels, config
from .errors import BudgetExceededError, OverflowDomainError

U64_MAX = (1 << 64) - 1
WINDOW_HI_MAX = 1 << 63

# Deterministic Miller-Rabin for n < 3.3e24 (covers all 64-bit inputs).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# cube root of 2**64 is just under 2642246
_CUBE_ROOT_LIMIT = 2642246


class Kind(enum.Enum):
    PRIMES = "primes"
    SQUAREFREE = "squarefree"


@lru_cache(maxsize=8)
def _primes_cached(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    out = np.flatnonzero(flags).astype(np.int64)
    out.flags.writeable = False
    return out


def primes_up_to(limit: int) -> np.ndarray:
    """All primes ``<= limit`` as an int64 array (read-only, cached)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    # round up to a power of two so nearby requests share one cached table
    table = _primes_cached(max(1 << (limit - 1).bit_length(), 1024))
    return table[: int(np.searchsorted(table, limit, side="right"))]


def is_prime(v: int) -> bool:
    if v < 2:
        return False
    if v > U64_MAX:
        raise OverflowDomainError(f"{v} exceeds the 64-bit range")
    for p in _MR_BASES:
        if v % p == 0:
            return v == p
    d, s = v - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, v)
        if x == 1 or x == v - 1:
            continue
        for _ in range(s - 1):
            x = x * x % v
            if x == v - 1:
                break
        else:
            return False
    return True


def _finish(smallest: int, cofactor: int) -> int | None:
    if smallest:
        return smallest
    r = math.isqrt(cofactor)
    if cofactor > 1 and r * r == cofactor:
        return r
    return None


def square_divisor(v: int) -> int | None:
    """Smallest prime ``p`` with ``p*p | v``, or ``None`` when ``v`` is squarefree.

    ``0`` is divisible by every square, so its answer is 2.
    """
    if v < 0 or v > U64_MAX:
        raise OverflowDomainError(f"{v} outside [0, 2**64)")
    if v == 0:
        return 2
    if v < WINDOW_HI_MAX:
        primes = primes_up_to(round(v ** (1.0 / 3.0)) + 2)
        smallest, cofactor = _kernels.strip_square_factors(np.array([v], dtype=np.int64), primes)
        return _finish(int(smallest[0]), int(cofactor[0]))
    # top bit set: int64 kernels cannot hold the value
    for p in primes_up_to(_CUBE_ROOT_LIMIT).tolist():
        if p * p * p > v:
            break
        if v % p == 0:
            v //= p
            if v % p == 0:
                return p
    return _finish(0, v)


def is_squarefree(v: int) -> bool:
    return v != 0 and square_divisor(v) is None


def square_divisors(values) -> np.ndarray:
    """Vectorized :func:`square_divisor` for int64 values in ``[1, 2**63)`` (0 = squarefree)."""
    values = np.asarray(values, dtype=np.int64)
    if values.size == 0:
        return np.zeros(0, dtype=np.int64)
    if values.min() < 1:
        raise ValueError("values must be positive")
    primes = primes_up_to(round(float(values.max()) ** (1.0 / 3.0)) + 2)
    smallest, cofactor = _kernels.strip_square_factors(values, primes)
    out = smallest.copy()
    for i in np.flatnonzero(smallest == 0).tolist():
        out[i] = _finish(0, int(cofactor[i])) or 0
    return out


@dataclass(frozen=True)
class SieveWindow:
    kind: Kind
    lo: int
    hi: int
    bits: np.ndarray

    def __len__(self):
        return self.hi - self.lo

    def __contains__(self, v):
        return self.lo <= v < self.hi and bool(self.bits[v - self.lo])

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.bits).astype(np.int64) + self.lo


def sieve_window(kind: Kind | str, lo: int, hi: int, cap: int | None = None) -> SieveWindow:
    """Membership indicator of ``[lo, hi)`` for the primes or the squarefree integers."""
    kind = Kind(kind)
    if not 0 <= lo < hi:
        raise ValueError(f"need 0 <= lo < hi, got [{lo}, {hi})")
    if hi > WINDOW_HI_MAX:
        raise OverflowDomainError(f"window end {hi} exceeds 2**63")
    cap = config.cap("window_cap") if cap is None else cap
    if hi - lo > cap:
        raise BudgetExceededError(f"window of {hi - lo} entries exceeds cap {cap}")
    root = math.isqrt(hi - 1)
    if root > cap:
        raise BudgetExceededError(f"base primes up to {root} exceed cap {cap}")
    base = primes_up_to(root)
    bits = np.ones(hi - lo, dtype=bool)
    if kind is Kind.PRIMES:
        _kernels.clear_multiples(bits, np.int64(lo), base, base * base)
        bits[: max(0, 2 - lo)] = False
    else:
        squares = base * base
        _kernels.clear_multiples(bits, np.int64(lo), squares, np.zeros_like(squares))
        if lo == 0:
            bits[0] = False
    return SieveWindow(kind, lo, hi, bits)


def iter_windows(kind: Kind | str, lo: int, hi: int, size: int | None = None):
    """Cover ``[lo, hi)`` with consecutive windows of at most ``size`` entries."""
    size = config.cap("window_cap") if size is None else size
    start = lo
    while start < hi:
        stop = min(hi, start + size)
        yield sieve_window(kind, start, stop, cap=max(size, math.isqrt(stop - 1)))
        start = stop


def count_members(kind: Kind | str, x: int, size: int | None = None) -> int:
    """Number of members in ``[1, x]``."""
    return sum(int(w.bits.sum()) for w in iter_windows(kind, 1, x + 1, size))


def squarefree_residues(N: int) -> list[int]:
    """Squarefree residues ``1 <= a < N`` in ascending order; ``N`` must be a power of two >= 2."""
    if N < 2 or N & (N - 1):
        raise ValueError(f"N must be a power of two >= 2, got {N}")
    return [a for a in range(1, N) if is_squarefree(a)]
