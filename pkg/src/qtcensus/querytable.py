"""Profiles of order n and censuses of the distinct profiles over ranges of suffixes.

For a value-based language the profile of order ``n`` of the integer ``y`` is
``{a < 2**n : y * 2**n + a in L}``, stored as a bitmask with bit ``a`` set for
each member.  A scan over ``y`` in ``[y_lo, y_hi)`` is an explicit lower bound
on the size of the query table of order ``n``; it never claims more.
"""
from __future__ import annotations

import hashlib
import heapq
import io
import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, automata, config
from .errors import BudgetExceededError, MalformedAutomatonError, OverflowDomainError
from .numtheory import WINDOW_HI_MAX, Kind, iter_windows
from .oracles import LanguageOracle, OracleKind
from .words import BitWord


@dataclass(frozen=True, order=True)
class Profile:
    n: int
    bits: int

    @classmethod
    def from_members(cls, n, members):
        bits = 0
        for a in members:
            if not 0 <= a < (1 << n):
                raise ValueError(f"member {a} outside [0, 2**{n})")
            bits |= 1 << a
        return cls(n, bits)

    @classmethod
    def from_bools(cls, n, flags):
        return cls.from_members(n, (a for a, f in enumerate(flags) if f))

    @property
    def size(self) -> int:
        return 1 << self.n

    def members(self) -> list[int]:
        return [a for a in range(self.size) if self.bits >> a & 1]

    def __contains__(self, a) -> bool:
        return bool(self.bits >> a & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def to_bools(self) -> list[bool]:
        return [bool(self.bits >> a & 1) for a in range(self.size)]

    def hex(self) -> str:
        return format(self.bits, f"0{max(1, self.size // 4)}x")

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.members())) + "}"


def _check_value_range(n: int, y_hi: int):
    if y_hi << n > WINDOW_HI_MAX:
        raise OverflowDomainError(f"values up to {y_hi} * 2**{n} exceed 2**63")


def profile(oracle: LanguageOracle, n: int, y: int) -> Profile:
    """Profile of order ``n`` of the suffix integer ``y``.

    For automaton oracles the suffix is the minimal binary word of ``y``
    (empty for 0) and the prefixes are the ``n``-bit words of each ``a``.
    """
    if n < 0 or y < 0:
        raise ValueError("n and y must be nonnegative")
    N = 1 << n
    if oracle.kind is OracleKind.AUTOMATON:
        w = BitWord.from_int(y)
        return Profile.from_bools(
            n, [automata.accepts(oracle.automaton, BitWord.from_int(a, n) + w) for a in range(N)]
        )
    _check_value_range(n, y + 1)
    lo = y * N
    try:
        flags = oracle.window(lo, lo + N)
    except BudgetExceededError:
        # base primes too large for one window; point tests still work
        flags = [oracle.contains_value(lo + a) for a in range(N)]
    return Profile.from_bools(n, flags)


# ---------------------------------------------------------------- counting


class ProfileCounter:
    """Multiplicity map ``profile bits -> (count, first y)`` with bounded memory.

    Once more than ``cap`` distinct keys are held, the map is written to disk
    as a sorted run and cleared; :meth:`entries` merges all runs.
    """

    def __init__(self, cap: int | None = None):
        self.cap = config.cap("profile_map_cap") if cap is None else cap
        self._mem: dict[int, list[int]] = {}
        self._runs: list[str] = []

    def add(self, key: int, count: int, first: int):
        cur = self._mem.get(key)
        if cur is None:
            self._mem[key] = [count, first]
            if len(self._mem) > self.cap:
                self._spill()
        else:
            cur[0] += count
            if first < cur[1]:
                cur[1] = first

    def _spill(self):
        fd, path = tempfile.mkstemp(prefix="qtcensus-run-", suffix=".txt")
        with os.fdopen(fd, "w") as fh:
            for key in sorted(self._mem):
                c, f = self._mem[key]
                fh.write(f"{key:x} {c} {f}\n")
        self._runs.append(path)
        self._mem = {}

    @property
    def spilled(self) -> bool:
        return bool(self._runs)

    @staticmethod
    def _read_run(path):
        with open(path) as fh:
            for line in fh:
                k, c, f = line.split()
                yield int(k, 16), int(c), int(f)

    def entries(self):
        """Sorted ``(key, count, first)`` triples; consumes the spilled runs."""
        mem = ((k, c, f) for k, (c, f) in sorted(self._mem.items()))
        streams = [self._read_run(p) for p in self._runs] + [mem]
        cur = None
        for key, c, f in heapq.merge(*streams):
            if cur is not None and cur[0] == key:
                cur[1] += c
                cur[2] = min(cur[2], f)
                continue
            if cur is not None:
                yield tuple(cur)
            cur = [key, c, f]
        if cur is not None:
            yield tuple(cur)
        for p in self._runs:
            os.unlink(p)
        self._runs = []


def census_hash(n: int, keys) -> str:
    """Canonical 64-bit hash of a set of order-``n`` profiles (hex string).

    Keys are hashed in ascending order as fixed-width little-endian bitmasks.
    """
    width = max(1, ((1 << n) + 7) // 8)
    h = hashlib.blake2b(digest_size=8)
    h.update(f"qtcensus-profiles:{n}\n".encode())
    for k in sorted(keys):
        h.update(int(k).to_bytes(width, "little"))
    return h.hexdigest()


@dataclass
class QueryTableScan:
    kind: str
    n: int
    y_lo: int
    y_hi: int
    distinct: int
    max_multiplicity: int
    popcount_histogram: list[int]
    baseline_hash: str
    entries: list[tuple[int, int, int]] = field(repr=False)  # (bits, multiplicity, first y)

    @property
    def profiles(self) -> list[Profile]:
        return [Profile(self.n, k) for k, _, _ in self.entries]

    @property
    def multiplicities(self) -> dict[Profile, int]:
        return {Profile(self.n, k): c for k, c, _ in self.entries}

    def witness(self, p: Profile) -> int:
        for k, _, f in self.entries:
            if k == p.bits:
                return f
        raise KeyError(p)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "yLo": self.y_lo,
            "yHi": self.y_hi,
            "distinct": self.distinct,
            "maxMultiplicity": self.max_multiplicity,
            "popcountHistogram": self.popcount_histogram,
            "baselineHash": self.baseline_hash,
            "bound": "lower bound over the scanned suffix range",
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("profile,multiplicity\n")
        for k, c, _ in self.entries:
            out.write(f"{Profile(self.n, k).hex()},{c}\n")
        return out.getvalue()


def _chunk_keys(oracle: LanguageOracle, n: int, y0: int, y1: int):
    """Unique profile keys in ``[y0, y1)`` with counts and first occurrences."""
    N = 1 << n
    if oracle.kind is OracleKind.AUTOMATON:
        keys = np.array([profile(oracle, n, y).bits for y in range(y0, y1)], dtype=object)
        uniq = {}
        for i, k in enumerate(keys.tolist()):
            if k in uniq:
                uniq[k][0] += 1
            else:
                uniq[k] = [1, y0 + i]
        return [(k, c, f) for k, (c, f) in uniq.items()]
    rows = oracle.window(y0 * N, y1 * N).reshape(y1 - y0, N)
    if N <= 64:
        keys = _kernels.pack_rows(rows)
        uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
        return list(zip((int(k) for k in uniq.tolist()), counts.tolist(), (y0 + i for i in first.tolist())))
    packed = np.packbits(rows, axis=1, bitorder="little")
    uniq, first, counts = np.unique(packed, axis=0, return_index=True, return_counts=True)
    return [
        (int.from_bytes(row.tobytes(), "little"), c, y0 + f)
        for row, c, f in zip(uniq, counts.tolist(), first.tolist())
    ]


def scan_profiles(
    oracle: LanguageOracle,
    n: int,
    y_lo: int,
    y_hi: int,
    *,
    chunk_y: int | None = None,
    workers: int = 1,
    profile_cap: int | None = None,
) -> QueryTableScan:
    """Exact census of the profiles of order ``n`` for ``y`` in ``[y_lo, y_hi)``.

    The result does not depend on ``chunk_y`` or ``workers``.
    """
    if n < 0 or not 0 <= y_lo < y_hi:
        raise ValueError("need n >= 0 and 0 <= y_lo < y_hi")
    N = 1 << n
    if oracle.value_based:
        _check_value_range(n, y_hi)
    work = (y_hi - y_lo) * N
    if work > config.cap("scan_cap"):
        raise BudgetExceededError(f"scan of {work} queries exceeds scan cap")
    if chunk_y is None:
        chunk_y = max(1, min(config.cap("window_cap") // N, 1 << 16 if N > 64 else 1 << 20))
    if chunk_y * N > config.cap("window_cap"):
        raise BudgetExceededError("chunk exceeds the window cap")
    bounds = [(y, min(y + chunk_y, y_hi)) for y in range(y_lo, y_hi, chunk_y)]
    counter = ProfileCounter(profile_cap)

    def work_on(b):
        return _chunk_keys(oracle, n, *b)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(work_on, bounds)
            for part in results:
                for k, c, f in part:
                    counter.add(k, c, f)
    else:
        for b in bounds:
            for k, c, f in work_on(b):
                counter.add(k, c, f)

    histogram = [0] * (N + 1)
    h = hashlib.blake2b(digest_size=8)
    h.update(f"qtcensus-profiles:{n}\n".encode())
    width = max(1, (N + 7) // 8)
    entries = []
    distinct = max_mult = 0
    for k, c, f in counter.entries():
        distinct += 1
        max_mult = max(max_mult, c)
        histogram[k.bit_count()] += 1
        h.update(k.to_bytes(width, "little"))
        entries.append((k, c, f))
    return QueryTableScan(
        oracle.label(), n, y_lo, y_hi, distinct, max_mult, histogram, h.hexdigest(), entries
    )


# ---------------------------------------------------------------- richness


@dataclass(frozen=True)
class RichnessReport:
    x: int
    N: int
    intervals: int
    threshold: float
    rich_count: int
    poor_count: int
    poor_prime_total: int
    rich_lower_bound: float
    poor_prime_bound: float
    boundary_primes: int
    boundary_rich: bool
    threshold_log2: float
    rich_count_log2: int
    rich_lower_bound_log2: float

    @property
    def rich_bound_holds(self) -> bool:
        return self.rich_count >= self.rich_lower_bound

    @property
    def poor_bound_holds(self) -> bool:
        return self.poor_prime_total <= self.poor_prime_bound

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "N": self.N,
            "intervals": self.intervals,
            "threshold": self.threshold,
            "richCount": self.rich_count,
            "poorCount": self.poor_count,
            "poorPrimeTotal": self.poor_prime_total,
            "richLowerBound": self.rich_lower_bound,
            "poorPrimeBound": self.poor_prime_bound,
            "richBoundHolds": self.rich_bound_holds,
            "poorBoundHolds": self.poor_bound_holds,
            "boundaryInterval": {"primes": self.boundary_primes, "rich": self.boundary_rich},
            "log2Variant": {
                "threshold": self.threshold_log2,
                "richCount": self.rich_count_log2,
                "richLowerBound": self.rich_lower_bound_log2,
            },
        }


def interval_prime_counts(n: int, intervals: int, window: int | None = None) -> np.ndarray:
    """Number of primes in ``[yN, (y+1)N)`` for ``y < intervals``."""
    N = 1 << n
    window = config.cap("window_cap") if window is None else window
    window = max(N, window // N * N)
    parts = [w.bits.reshape(-1, N).sum(axis=1) for w in iter_windows(Kind.PRIMES, 0, intervals * N, window)]
    return np.concatenate(parts).astype(np.int64)


def richness_report(x: int, n: int) -> RichnessReport:
    """Classify the length-``N`` intervals below ``x`` as rich or poor.

    An interval is rich when it holds at least ``N / (2 ln x)`` primes.  The
    base-2 logarithm variant is reported alongside for comparison.
    """
    N = 1 << n
    if not (N >= 2 and x >= N):
        raise ValueError("need x >= N = 2**n >= 2")
    intervals = x // N
    counts = interval_prime_counts(n, intervals)
    ln_x = math.log(x)
    threshold = N / (2 * ln_x)
    rich = counts >= threshold
    threshold2 = N / (2 * math.log2(x))
    return RichnessReport(
        x=x,
        N=N,
        intervals=intervals,
        threshold=threshold,
        rich_count=int(rich.sum()),
        poor_count=int((~rich).sum()),
        poor_prime_total=int(counts[~rich].sum()),
        rich_lower_bound=x / (2 * N * ln_x),
        poor_prime_bound=x / (2 * ln_x),
        boundary_primes=int(counts[0]),
        boundary_rich=bool(rich[0]),
        threshold_log2=threshold2,
        rich_count_log2=int((counts >= threshold2).sum()),
        rich_lower_bound_log2=x / (2 * N * math.log2(x)),
    )


# ---------------------------------------------------------------- DFA side


@dataclass(frozen=True)
class BoundCheck:
    n: int
    suffix_len_max: int
    distinct: int
    reachable: int  # states reachable within n steps
    bound: int
    holds: bool

    def to_dict(self):
        return {
            "n": self.n,
            "suffixLenMax": self.suffix_len_max,
            "distinct": self.distinct,
            "reachable": self.reachable,
            "bound": self.bound,
            "holds": self.holds,
        }


def dfa_suffix_profiles(aut: automata.AlternatingAutomaton, n: int, suffix_len_max: int) -> set[int]:
    """Profile bitmasks of order ``n`` over every suffix word of length ``<= suffix_len_max``."""
    if not aut.is_deterministic:
        raise MalformedAutomatonError("profile bound check needs a deterministic automaton")
    index = {s: i for i, s in enumerate(aut.states)}
    step = np.array([[index[aut.step(s, a)] for s in aut.states] for a in automata.SYMBOLS], dtype=np.int64)
    accepting = np.array([s in aut.accepting for s in aut.states])
    after_prefix = np.array(
        [index[aut.run(BitWord.from_int(a, n))] for a in range(1 << n)], dtype=np.int64
    )
    seen: set[int] = set()
    layer = np.arange(len(aut.states), dtype=np.int64)[None, :]  # row w: state reached from s after w
    for _ in range(suffix_len_max + 1):
        rows = accepting[layer[:, after_prefix]]
        if rows.shape[1] <= 64:
            seen.update(int(k) for k in np.unique(_kernels.pack_rows(rows)).tolist())
        else:
            for r in np.unique(np.packbits(rows, axis=1, bitorder="little"), axis=0):
                seen.add(int.from_bytes(r.tobytes(), "little"))
        layer = np.concatenate([step[0][layer], step[1][layer]])
    return seen


def dfa_profile_bound_check(
    aut: automata.AlternatingAutomaton, n: int, suffix_len_max: int, cap: int | None = None
) -> BoundCheck:
    """Distinct profiles of a DFA never exceed 2 ** (states reachable within n steps)."""
    cap = config.cap("work_cap") if cap is None else cap
    work = (1 << (suffix_len_max + 1)) * (1 << n)
    if work > cap:
        raise BudgetExceededError(f"suffix enumeration of {work} queries exceeds cap {cap}")
    distinct = len(dfa_suffix_profiles(aut, n, suffix_len_max))
    reachable = automata.reachable_census(aut, n)[-1]
    bound = 1 << reachable
    return BoundCheck(n, suffix_len_max, distinct, reachable, bound, distinct <= bound)
