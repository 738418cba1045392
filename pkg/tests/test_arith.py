import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bohrkit import MultiIndex, PrimeTable, divisors, factorize, index_of, mobius, multi_index
from bohrkit.arith import default_table
from bohrkit.errors import RangeError, ValidationError

from oracles import brute_divisors, brute_mobius, trial_factor


@pytest.mark.parametrize("n, expected", [(1, []), (12, [(2, 2), (3, 1)]), (97, [(97, 1)]), (1024, [(2, 10)])])
def test_factorize_examples(n, expected):
    assert factorize(n) == expected


def test_factorize_primorial_on_larger_table():
    t = PrimeTable(10**7)
    assert t.factorize(9699690) == [(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (17, 1), (19, 1)]


def test_factorize_out_of_range():
    with pytest.raises(RangeError):
        factorize(0)
    with pytest.raises(RangeError):
        factorize(default_table().limit + 1)


@pytest.mark.parametrize("n, alpha", [(1, ()), (12, (2, 1)), (50, (1, 0, 2)), (7, (0, 0, 0, 1))])
def test_multi_index_and_inverse(n, alpha):
    assert multi_index(n) == MultiIndex(alpha)
    assert index_of(MultiIndex(alpha)) == n
    assert index_of(alpha) == n


def test_multi_index_trims_trailing_zeros():
    assert MultiIndex((1, 0, 0)).exponents == (1,)
    with pytest.raises(ValidationError):
        MultiIndex((-1,))


def test_index_of_overflow():
    with pytest.raises(RangeError):
        index_of((40,))


@pytest.mark.parametrize("n, mu", [(1, 1), (2, -1), (6, 1), (12, 0), (30, -1)])
def test_mobius_examples(n, mu):
    assert mobius(n) == mu


def test_divisors_examples():
    assert divisors(1) == [1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(28) == [1, 2, 4, 7, 14, 28]


def test_against_trial_division_up_to_3000():
    t = default_table()
    mu = t.mobius_array(3000)
    for n in range(1, 3001):
        assert t.factorize(n) == trial_factor(n)
        assert mu[n] == brute_mobius(n) == t.mobius(n)
    for n in range(1, 400):
        assert t.divisors(n) == brute_divisors(n)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 1000), st.integers(1, 1000))
def test_semigroup_homomorphism(m, n):
    assert multi_index(m * n) == multi_index(m) + multi_index(n)


def test_mobius_sum_over_divisors():
    mu = default_table().mobius_array(5000)
    for n in range(1, 5001):
        s = sum(mu[d] for d in divisors(n))
        assert s == (1 if n == 1 else 0)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**6))
def test_divisor_count_and_round_trip(n):
    assert len(divisors(n)) == math.prod(e + 1 for _, e in factorize(n))
    assert index_of(multi_index(n)) == n


def test_smooth_mask():
    t = default_table()
    mask = t.smooth_mask(30, 2)
    assert [n for n in range(31) if mask[n]] == [1, 2, 3, 4, 6, 8, 9, 12, 16, 18, 24, 27]
