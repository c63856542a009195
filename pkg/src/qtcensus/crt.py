"""Build an integer whose squarefree profile of order n is a prescribed set.

Given ``N = 2**n`` and a target ``T`` inside the squarefree residues ``S`` of
``[1, N)``, choose ``y`` so that ``y*N + a`` is squarefree exactly for
``a in T``:

* ``y = 0 (mod p*p)`` for every prime with ``p*p < N``, so each
  non-squarefree ``a`` keeps its square divisor;
* for each ``a`` in ``S - T`` (ascending) take the next unused odd prime ``p``
  (ascending) and force ``y*N = -a (mod p*p)``;
* solve the system by CRT for ``y0 (mod q')`` and walk
  ``y = z*q' + y0`` for ``z = 0, 1, ...`` until every ``y*N + a`` with
  ``a in T`` is squarefree.

The search, not an existence argument, produces ``y``; the result is then
checked exactly for every ``a < N``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import CapExceededError, OverflowDomainError, SearchExhaustedError
from .numtheory import WINDOW_HI_MAX, is_prime, square_divisor, square_divisors, squarefree_residues
from .querytable import Profile, scan_profiles
from .oracles import SQUAREFREE


def crt(residues, moduli) -> tuple[int, int]:
    """Solve ``x = r_i (mod m_i)`` for pairwise coprime moduli; returns ``(x, prod m_i)``."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        if mi < 1:
            raise ValueError("moduli must be positive")
        if math.gcd(m, mi) != 1:
            raise ValueError(f"modulus {mi} is not coprime to the others")
        # x + m*t = r (mod mi)
        t = (r - x) * pow(m, -1, mi) % mi
        x += m * t
        m *= mi
    return x % m, m


def _primes_from(start: int):
    p = start
    while True:
        if is_prime(p):
            yield p
        p += 1


@dataclass
class CrtWitness:
    n: int
    T: tuple[int, ...]
    S: tuple[int, ...]
    base_primes: tuple[int, ...]
    q: int
    assignment: dict[int, int]  # a in S - T -> prime whose square divides y*N + a
    zero_primes: tuple[int, ...]  # extra primes with y = 0 (mod p*p), added on retries
    q_prime: int
    y0: int
    z: int
    y: int
    verified: bool = False
    transcript: list[dict] = field(default_factory=list)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def k(self) -> int:
        return len(self.base_primes)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "T": list(self.T),
            "S": list(self.S),
            "k": self.k,
            "basePrimes": list(self.base_primes),
            "q": self.q,
            "assignment": {str(a): p for a, p in sorted(self.assignment.items())},
            "zeroPrimes": list(self.zero_primes),
            "qPrime": self.q_prime,
            "y0": self.y0,
            "z": self.z,
            "y": self.y,
            "verified": self.verified,
            "transcript": self.transcript,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> CrtWitness:
        return cls(
            n=int(d["n"]),
            T=tuple(int(a) for a in d["T"]),
            S=tuple(int(a) for a in d["S"]),
            base_primes=tuple(int(p) for p in d["basePrimes"]),
            q=int(d["q"]),
            assignment={int(a): int(p) for a, p in d["assignment"].items()},
            zero_primes=tuple(int(p) for p in d.get("zeroPrimes", ())),
            q_prime=int(d["qPrime"]),
            y0=int(d["y0"]),
            z=int(d["z"]),
            y=int(d["y"]),
            verified=bool(d.get("verified", False)),
            transcript=list(d.get("transcript", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> CrtWitness:
        """Accepts a bare witness or a CLI report wrapping one under ``"result"``."""
        d = json.loads(text)
        if "n" not in d and "result" in d:
            d = d["result"]
        return cls.from_dict(d)


def parse_subset(text: str, n: int) -> tuple[int, ...]:
    """Parse ``"1,3,5"`` and check it lies inside the squarefree residues mod ``2**n``."""
    items = [s for s in (t.strip() for t in text.split(",")) if s]
    T = tuple(sorted({int(s) for s in items}))
    _check_subset(T, squarefree_residues(1 << n))
    return T


def _check_subset(T, S):
    allowed = set(S)
    for a in T:
        if a not in allowed:
            raise ValueError(f"{a} is not a squarefree residue in [1, N); allowed: {sorted(allowed)}")


def _check_order(n: int, n_forced: int, max_order: int):
    if n < 2:
        raise ValueError("construction needs n >= 2 (for n = 1 the profile of 2y can contain 0)")
    if n <= max_order:
        return
    if n == 4 and n_forced <= 5:
        return
    raise CapExceededError(
        f"order {n} with {n_forced} forced residues is above the exact-verification cap (max order {max_order})"
    )


def _search(y0: int, q_prime: int, N: int, T, z_bound: int) -> int | None:
    """Smallest ``z < z_bound`` with ``y = z*q' + y0 >= 1`` and ``y*N + a`` squarefree for all ``a`` in T."""
    z = 0 if y0 > 0 else 1
    # largest z with (y + 1) * N <= 2**63
    z_max = (WINDOW_HI_MAX // N - 1 - y0) // q_prime
    offsets = np.array(T, dtype=np.int64)
    block = 8
    while z < z_bound:
        if z > z_max:
            raise OverflowDomainError(f"search passed z = {z_max}; y*N + N would exceed 2**63 (qPrime = {q_prime})")
        stop = min(z_bound, z + block, z_max + 1)
        ys = [zz * q_prime + y0 for zz in range(z, stop)]
        if not T:
            return z
        values = np.array(ys, dtype=np.int64)[:, None] * N + offsets[None, :]
        ok = (square_divisors(values.ravel()) == 0).reshape(values.shape).all(axis=1)
        hits = np.flatnonzero(ok)
        if hits.size:
            return z + int(hits[0])
        z = stop
        block = min(block * 2, 4096)
    return None


def construct_witness(
    n: int, T, *, z_bound: int | None = None, max_order: int = 3, retries: int = 3
) -> CrtWitness:
    N = 1 << n
    S = tuple(squarefree_residues(N)) if n >= 1 else ()
    T = tuple(sorted(set(T)))
    _check_subset(T, S)
    forced = [a for a in S if a not in set(T)]
    _check_order(n, len(forced), max_order)
    z_bound = config.cap("z_bound") if z_bound is None else z_bound

    base = []
    p = 2
    while p * p < N:
        if is_prime(p):
            base.append(p)
        p += 1
    q = math.prod(p * p for p in base)
    # auxiliary primes must not divide N, hence odd
    pool = _primes_from(max(3, (base[-1] + 1) if base else 3))
    assignment = {a: next(pool) for a in forced}
    zero_primes: list[int] = []

    for _attempt in range(retries + 1):
        residues, moduli = [], []
        for p in base + zero_primes:
            residues.append(0)
            moduli.append(p * p)
        for a, p in assignment.items():
            m = p * p
            residues.append(-a * pow(N, -1, m) % m)
            moduli.append(m)
        y0, q_prime = crt(residues, moduli)
        z = _search(y0, q_prime, N, T, z_bound)
        if z is not None:
            w = CrtWitness(n, T, S, tuple(base), q, assignment, tuple(zero_primes), q_prime, y0, z, z * q_prime + y0)
            w.verified, w.transcript = verify_witness(w)
            return w
        # shift the layout: the next unused prime also divides y, so it can no longer obstruct
        zero_primes.append(next(pool))
    raise SearchExhaustedError(
        f"no z < {z_bound} verified after {retries} retries (last qPrime = {q_prime})",
        q_prime=q_prime,
        z_bound=z_bound,
    )


def verify_witness(w: CrtWitness) -> tuple[bool, list[dict]]:
    """Re-check a witness from scratch; returns ``(ok, transcript)``.

    The transcript has one entry per ``a < N`` with the smallest prime whose
    square divides ``y*N + a`` (``None`` when squarefree), followed by an
    entry for each violated construction invariant.
    """
    N = w.N
    if (w.y + 1) * N > WINDOW_HI_MAX:
        raise OverflowDomainError(f"y*N + N exceeds 2**63 for y = {w.y}")
    target = set(w.T)
    transcript = []
    ok = True
    for a in range(N):
        v = w.y * N + a
        d = square_divisor(v)
        good = (d is None) == (a in target)
        ok &= good
        transcript.append({"a": a, "value": v, "inT": a in target, "squareDivisor": d, "ok": good})
    invariants = [
        ("y = y0 (mod qPrime)", w.q_prime > 0 and (w.y - w.y0) % w.q_prime == 0),
        ("0 <= y0 < qPrime", 0 <= w.y0 < w.q_prime),
        ("y0 = 0 (mod q)", w.q > 0 and w.y0 % w.q == 0),
    ]
    for a, p in sorted(w.assignment.items()):
        invariants.append((f"{p}^2 | y*N + {a}", (w.y * N + a) % (p * p) == 0))
    for name, holds in invariants:
        if not holds:
            ok = False
            transcript.append({"invariant": name, "ok": False})
    return ok, transcript


def witness_profile(w: CrtWitness) -> Profile:
    return Profile.from_members(w.n, [e["a"] for e in w.transcript if "a" in e and e["squareDivisor"] is None])


@dataclass(frozen=True)
class CoverageReport:
    n: int
    y_bound: int
    S: tuple[int, ...]
    observed: int  # distinct profiles contained in S
    total: int  # 2 ** |S|
    outside: tuple[Profile, ...]  # observed profiles not contained in S
    missing: tuple[Profile, ...]
    baseline_hash: str

    @property
    def coverage(self) -> float:
        return self.observed / self.total

    @property
    def all_inside(self) -> bool:
        return not self.outside

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "yBound": self.y_bound,
            "S": list(self.S),
            "observed": self.observed,
            "total": self.total,
            "coverage": self.coverage,
            "outside": [p.members() for p in self.outside],
            "missing": [p.members() for p in self.missing],
            "baselineHash": self.baseline_hash,
        }


def profile_coverage_census(n: int, y_bound: int, **scan_kwargs) -> CoverageReport:
    """Fraction of the ``2**|S|`` subsets of ``S`` realized as profiles for ``y < y_bound``.

    For ``n >= 2`` every profile must lie inside ``S``: 0 and each
    non-squarefree ``a < N`` share a square divisor with ``y*N + a``.  At
    ``n = 1`` that fails (``2y`` can be squarefree) and the profiles holding 0
    are reported in ``outside``.
    """
    N = 1 << n
    S = tuple(squarefree_residues(N))
    scan = scan_profiles(SQUAREFREE, n, 0, y_bound, **scan_kwargs)
    s_mask = sum(1 << a for a in S)
    inside = {p.bits for p in scan.profiles if p.bits & ~s_mask == 0}
    outside = tuple(p for p in scan.profiles if p.bits & ~s_mask)
    missing = ()
    if len(S) <= 16:
        missing = tuple(
            Profile.from_members(n, [a for i, a in enumerate(S) if m >> i & 1])
            for m in range(1 << len(S))
            if sum(1 << a for i, a in enumerate(S) if m >> i & 1) not in inside
        )
    return CoverageReport(n, y_bound, S, len(inside), 1 << len(S), outside, missing, scan.baseline_hash)
