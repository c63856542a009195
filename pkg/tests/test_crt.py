import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy.ntheory.modular import crt as sympy_crt

from naive import naive_is_squarefree
from qtcensus.crt import (
    CrtWitness,
    construct_witness,
    crt,
    parse_subset,
    profile_coverage_census,
    verify_witness,
    witness_profile,
)
from qtcensus.errors import CapExceededError, OverflowDomainError, SearchExhaustedError
from qtcensus.numtheory import squarefree_residues
from qtcensus.querytable import profile
from qtcensus.oracles import SQUAREFREE


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=6), st.randoms(use_true_random=False))
def test_crt_matches_sympy(residues, rnd):
    pool = [4, 9, 25, 49, 121, 169, 289, 361]
    moduli = rnd.sample(pool, len(residues))
    x, m = crt(residues, moduli)
    sx, sm = sympy_crt(moduli, residues)
    assert (x, m) == (int(sx), int(sm))
    assert 0 <= x < m and all((x - r) % mi == 0 for r, mi in zip(residues, moduli))


def test_crt_rejects_non_coprime():
    with pytest.raises(ValueError):
        crt([1, 2], [4, 6])


def test_full_target_n3_minimal_witness():
    w = construct_witness(3, [1, 2, 3, 5, 6, 7])
    assert (w.q, w.q_prime, w.y0, w.z, w.y) == (4, 4, 0, 1, 4)
    assert w.verified
    assert [a for a in range(8) if naive_is_squarefree(32 + a)] == [1, 2, 3, 5, 6, 7]


def test_documented_witness_n3():
    w = construct_witness(3, [1, 3, 5, 7])
    assert w.base_primes == (2,) and w.k == 1 and w.q == 4
    assert w.assignment == {2: 3, 6: 5}
    assert (w.q_prime, w.y0, w.z, w.y) == (900, 668, 0, 668)
    assert (8 * 668 + 2) % 9 == 0 and (8 * 668 + 6) % 25 == 0
    assert all(naive_is_squarefree(v) for v in (5345, 5347, 5349, 5351))
    assert w.verified


def test_empty_target_n2():
    w = construct_witness(2, [])
    assert w.verified
    assert all(not naive_is_squarefree(4 * w.y + a) for a in range(4))
    assert profile(SQUAREFREE, 2, w.y).members() == []


@pytest.mark.parametrize("T", [list(c) for r in range(4) for c in itertools.combinations([1, 2, 3], r)])
def test_all_targets_n2(T):
    w = construct_witness(2, T)
    assert w.verified
    assert profile(SQUAREFREE, 2, w.y).members() == T
    assert witness_profile(w).members() == T


def test_random_targets_n3_and_determinism():
    rng = random.Random(42)
    S = squarefree_residues(8)
    for _ in range(20):
        T = [a for a in S if rng.random() < 0.5]
        w = construct_witness(3, T)
        ok, _ = verify_witness(w)
        assert ok and w.verified
        assert [a for a in range(8) if naive_is_squarefree(8 * w.y + a)] == T
        assert construct_witness(3, T).to_json() == w.to_json()


def test_congruence_invariants():
    w = construct_witness(3, [1])
    assert 0 <= w.y0 < w.q_prime and w.y0 % w.q == 0
    for a, p in w.assignment.items():
        assert (w.y0 * 8 + a) % (p * p) == 0
    assert sorted(w.assignment) == [2, 3, 5, 6, 7]
    assert list(w.assignment.values()) == [3, 5, 7, 11, 13]


def test_order_four_allowed_with_few_forced():
    S = squarefree_residues(16)
    w = construct_witness(4, S[:-3])
    assert w.verified and w.base_primes == (2, 3) and w.q == 36
    with pytest.raises(CapExceededError):
        construct_witness(4, S[:3])
    with pytest.raises(CapExceededError):
        construct_witness(5, [1])


def test_invalid_inputs():
    with pytest.raises(ValueError):
        construct_witness(3, [4])
    with pytest.raises(ValueError):
        construct_witness(1, [1])
    with pytest.raises(ValueError):
        parse_subset("1,4", 3)
    assert parse_subset(" 7, 1,3 ", 3) == (1, 3, 7)
    assert parse_subset("", 3) == ()


def test_search_exhaustion_and_retry():
    # with z_bound = 1 only z = 0 is tried; each retry enlarges the layout
    try:
        w = construct_witness(3, [1, 2, 3, 5, 6, 7], z_bound=1)
    except SearchExhaustedError as exc:
        assert exc.z_bound == 1 and exc.q_prime > 4
    else:
        assert w.zero_primes and w.verified
    with pytest.raises(SearchExhaustedError):
        construct_witness(3, [1, 2, 3, 5, 6, 7], z_bound=1, retries=0)


def test_overflow_guard():
    with pytest.raises(OverflowDomainError):
        verify_witness(
            CrtWitness(3, (1,), (1, 2, 3, 5, 6, 7), (2,), 4, {}, (), 4, 0, 2**61, 2**62)
        )


def test_tampered_witness_rejected():
    w = construct_witness(3, [1, 3, 5, 7])
    w.y += 1
    ok, transcript = verify_witness(w)
    assert not ok
    bad = [e for e in transcript if not e["ok"]]
    assert any("a" in e for e in bad)


def test_json_roundtrip():
    w = construct_witness(3, [2, 5])
    again = CrtWitness.from_json(w.to_json())
    assert again == w
    assert verify_witness(again)[0]


def test_coverage_n2():
    c = profile_coverage_census(2, 10**4)
    assert c.coverage == 1.0 and c.all_inside and c.total == 8


def test_coverage_n3_lists_missing_and_first_empty_profile():
    c = profile_coverage_census(3, 10**5)
    assert c.all_inside
    assert len(c.missing) == c.total - c.observed
    # the empty profile needs six distinct odd prime squares at once
    y = 1108753
    assert all(not naive_is_squarefree(8 * y + a) for a in range(8))


def test_coverage_n1_anomaly():
    c = profile_coverage_census(1, 100)
    assert not c.all_inside
    assert all(0 in p for p in c.outside)
