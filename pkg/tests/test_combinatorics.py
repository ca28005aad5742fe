import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fatpoints.combinatorics import (
    binomial,
    derivative_multiindices,
    falling_factorial,
    monomials,
    subsets,
)

from oracles import stars_and_bars


@pytest.mark.parametrize("a,b,expected", [(6, 4, 15), (5, 5, 1), (-3, 2, 0), (2, 3, 0), (0, 0, 1)])
def test_binomial_examples(a, b, expected):
    assert binomial(a, b) == expected


def test_binomial_negative_b():
    with pytest.raises(ValueError):
        binomial(3, -1)


@given(st.integers(1, 60), st.integers(1, 60))
def test_pascal_identity(a, b):
    assert binomial(a, b) == binomial(a - 1, b) + binomial(a - 1, b - 1)


@given(st.integers(-20, 60), st.integers(0, 60))
def test_binomial_matches_math_comb(a, b):
    assert binomial(a, b) == (math.comb(a, b) if a >= 0 else 0)


def test_monomials_examples():
    assert monomials(1, 3) == ((3, 0), (2, 1), (1, 2), (0, 3))
    assert len(monomials(4, 5)) == 126
    assert len(monomials(5, 3)) == 56


@pytest.mark.parametrize("n", range(1, 7))
def test_monomial_counts_and_order(n):
    for d in range(13):
        mons = monomials(n, d)
        assert len(mons) == binomial(n + d, n)
        assert len(set(mons)) == len(mons)
        assert all(len(e) == n + 1 and sum(e) == d for e in mons)
        # graded-lex with x0 > x1 > ... : strictly decreasing as tuples
        assert list(mons) == sorted(mons, reverse=True)


@pytest.mark.parametrize("n,d", [(1, 4), (2, 5), (3, 3), (4, 2), (5, 3)])
def test_monomials_match_stars_and_bars(n, d):
    assert set(monomials(n, d)) == set(stars_and_bars(n, d))


def test_derivative_multiindices():
    assert len(derivative_multiindices(4, 2)) == 15
    assert len(derivative_multiindices(5, 1)) == 6
    assert derivative_multiindices(3, 0) == ((0, 0, 0, 0),)
    for n in range(1, 5):
        for k in range(5):
            assert set(derivative_multiindices(n, k)) == set(monomials(n, k))
            assert len(derivative_multiindices(n, k)) == binomial(n + k, k)


def test_subsets_examples():
    assert list(subsets(3, 2, 2)) == [(1, 2), (1, 3), (2, 3)]
    assert list(subsets(5, 0, 0)) == [()]
    assert len(list(subsets(6, 1, 6))) == 63


@given(st.integers(0, 8), st.data())
def test_subsets_each_once(s, data):
    kmin = data.draw(st.integers(0, s))
    kmax = data.draw(st.integers(kmin, s))
    got = list(subsets(s, kmin, kmax))
    assert len(got) == len(set(got)) == sum(math.comb(s, k) for k in range(kmin, kmax + 1))
    assert all(kmin <= len(t) <= kmax and set(t) <= set(range(1, s + 1)) for t in got)


def test_subsets_bad_range():
    with pytest.raises(ValueError):
        list(subsets(3, 2, 4))


@given(st.integers(0, 30), st.integers(0, 30))
def test_falling_factorial(e, a):
    expected = math.factorial(e) // math.factorial(e - a) if a <= e else 0
    assert falling_factorial(e, a) == expected
