import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from cpaclab.codec import (
    godel_decode,
    godel_encode,
    nth_prime,
    pair,
    sample_decode,
    sample_encode,
    unpair,
)


def test_primes_match_sympy():
    assert [nth_prime(i) for i in range(1, 51)] == list(sympy.primerange(2, sympy.prime(50) + 1))


@pytest.mark.parametrize("t, code", [((0,), 2), ((1, 2), 108), ((0, 0, 0), 30)])
def test_godel_encode_values(t, code):
    assert godel_encode(t) == code


def test_godel_encode_rejects_empty():
    with pytest.raises(ValueError):
        godel_encode(())


@pytest.mark.parametrize("n, t", [(2, (0,)), (108, (1, 2)), (5, None), (0, None), (1, None), (10, None)])
def test_godel_decode(n, t):
    assert godel_decode(n) == t


def test_godel_round_trip_small():
    for length in range(1, 5):
        for t in itertools.product(range(6), repeat=length):
            assert godel_decode(godel_encode(t)) == t


def test_godel_decode_agrees_with_factorization():
    for n in range(2, 3000):
        f = sympy.factorint(n)
        ps = sorted(f)
        contiguous = ps == list(sympy.primerange(2, ps[-1] + 1))
        expected = tuple(f[p] - 1 for p in ps) if contiguous else None
        assert godel_decode(n) == expected, n


def test_pair_values():
    assert pair(0, 0) == 0
    assert pair(1, 2) == 8
    assert [pair(a, b) for a, b in [(1, 0), (0, 1), (2, 0)]] == [1, 2, 3]


def test_pair_round_trip_grid():
    for a in range(21):
        for b in range(21):
            assert unpair(pair(a, b)) == (a, b)


def test_pair_is_bijective_on_prefix():
    assert sorted(pair(*unpair(n)) for n in range(5000)) == list(range(5000))


@given(st.integers(0, 10**40), st.integers(0, 10**40))
def test_pair_round_trip_big(a, b):
    assert unpair(pair(a, b)) == (a, b)


def test_sample_codes():
    assert sample_encode([(0, 0)]) == 2
    assert sample_encode([(1, 1), (0, 0)]) == 48


def test_sample_round_trip():
    cells = [(x, y) for x in range(4) for y in (0, 1)]
    for m in range(1, 4):
        for S in itertools.product(cells, repeat=m):
            assert sample_decode(sample_encode(S)) == S


def test_sample_decode_splits_entries_by_parity():
    assert sample_decode(godel_encode((5,))) == ((2, 1),)
    assert sample_decode(7) is None
