import math
import random

import numpy as np
import pytest
import sympy

from naive import naive_is_squarefree, trial_division_is_prime
from qtcensus.errors import BudgetExceededError, OverflowDomainError
from qtcensus.numtheory import (
    Kind,
    count_members,
    is_prime,
    is_squarefree,
    iter_windows,
    primes_up_to,
    sieve_window,
    square_divisor,
    square_divisors,
    squarefree_residues,
)


@pytest.mark.parametrize("v,expected", [(0, False), (1, False), (2, True), (561, False), (1_000_000_007, True)])
def test_is_prime_examples(v, expected):
    assert is_prime(v) is expected
    assert trial_division_is_prime(v) is expected


def test_is_prime_hard_composites():
    # strong pseudoprimes to many small bases, and big known primes
    for v in (3215031751, 3825123056546413051, 318665857834031151167461):
        if v < 2**64:
            assert not is_prime(v)
    assert is_prime(2**61 - 1)
    assert is_prime(2**64 - 59)
    assert not is_prime(2**64 - 1)
    with pytest.raises(OverflowDomainError):
        is_prime(2**64)


def test_is_prime_random_64bit_against_sympy():
    r = random.Random(7)
    for _ in range(2000):
        v = r.getrandbits(64) | 1
        assert is_prime(v) == sympy.isprime(v)


@pytest.mark.parametrize("v,expected", [(1, True), (12, False), (30030, True), (0, False), (4, False)])
def test_is_squarefree_examples(v, expected):
    assert is_squarefree(v) is expected


def test_square_divisor_is_smallest():
    assert square_divisor(12) == 2
    assert square_divisor(9 * 25 * 7) == 3
    assert square_divisor(30030) is None
    assert square_divisor(0) == 2
    # cofactor that is the square of a prime above the cube root
    p = 1_000_003
    assert square_divisor(p * p * 3) == p
    assert square_divisor(p * 999_983) is None


def test_squarefree_large_values_against_sympy():
    r = random.Random(11)
    for _ in range(300):
        v = r.getrandbits(44) + 1
        assert is_squarefree(v) == all(e == 1 for e in sympy.factorint(v).values())
    for v in (2**64 - 1, 2**63 + 9, (2**32 - 5) ** 2):
        assert is_squarefree(v) == all(e == 1 for e in sympy.factorint(v).values())


def test_square_divisors_vectorized_matches_pointwise():
    r = random.Random(5)
    vals = [r.randrange(1, 2**50) for _ in range(500)] + [49 * 1_000_003, 1_000_003**2]
    got = square_divisors(vals).tolist()
    assert got == [square_divisor(v) or 0 for v in vals]


def test_sieve_examples():
    assert sieve_window(Kind.PRIMES, 0, 16).members().tolist() == [2, 3, 5, 7, 11, 13]
    expected = [v for v in range(16) if naive_is_squarefree(v)]
    assert sieve_window(Kind.SQUAREFREE, 0, 16).members().tolist() == expected == [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15]


@pytest.mark.parametrize("kind", list(Kind))
def test_sieve_split_invariance(kind):
    r = random.Random(3)
    for _ in range(20):
        lo = r.randrange(0, 2**36)
        hi = lo + r.randrange(2, 5000)
        mid = r.randrange(lo + 1, hi)
        whole = sieve_window(kind, lo, hi).bits
        split = np.concatenate([sieve_window(kind, lo, mid).bits, sieve_window(kind, mid, hi).bits])
        assert np.array_equal(whole, split)


def test_sieve_tiny_windows_and_bounds():
    assert sieve_window(Kind.SQUAREFREE, 0, 1).bits.tolist() == [False]
    assert sieve_window(Kind.SQUAREFREE, 0, 4).bits.tolist() == [False, True, True, True]
    assert sieve_window(Kind.PRIMES, 1, 3).bits.tolist() == [False, True]
    with pytest.raises(ValueError):
        sieve_window(Kind.PRIMES, 5, 5)
    with pytest.raises(BudgetExceededError):
        sieve_window(Kind.PRIMES, 0, 100, cap=10)
    with pytest.raises(OverflowDomainError):
        sieve_window(Kind.PRIMES, 2**63 - 5, 2**63 + 1)


def test_windows_near_top_of_range():
    lo = 2**40 - 300
    w = sieve_window(Kind.PRIMES, lo, lo + 300)
    assert w.members().tolist() == [v for v in range(lo, lo + 300) if sympy.isprime(v)]


def test_prime_count_million():
    assert count_members(Kind.PRIMES, 10**6, size=1 << 17) == 78498
    assert sum(1 for v in range(1, 10**6 + 1, 997) if is_prime(v)) == sum(
        1 for v in range(1, 10**6 + 1, 997) if v in sieve_window(Kind.PRIMES, v, v + 1)
    )


def test_primes_up_to():
    assert primes_up_to(1).tolist() == []
    assert primes_up_to(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_up_to(10**6)) == 78498


def test_iter_windows_cover_range():
    ws = list(iter_windows(Kind.SQUAREFREE, 5, 1000, size=97))
    assert ws[0].lo == 5 and ws[-1].hi == 1000
    assert all(a.hi == b.lo for a, b in zip(ws, ws[1:]))


@pytest.mark.parametrize("N,expected", [(2, [1]), (4, [1, 2, 3]), (8, [1, 2, 3, 5, 6, 7])])
def test_squarefree_residues(N, expected):
    assert squarefree_residues(N) == expected


def test_squarefree_residues_16_and_errors():
    assert squarefree_residues(16) == [a for a in range(1, 16) if naive_is_squarefree(a)]
    assert len(squarefree_residues(16)) == 11
    for bad in (0, 1, 6, 12):
        with pytest.raises(ValueError):
            squarefree_residues(bad)


def test_density_small_scale():
    x = 10**5
    assert abs(count_members(Kind.SQUAREFREE, x) / x - 6 / math.pi**2) < 1e-2
