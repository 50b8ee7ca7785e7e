from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from virteuler.errors import ArgumentError
from virteuler.exact import (
    as_rational,
    bernoulli,
    bernoulli_cap,
    bernoulli_check,
    binomial,
    binomial_rational_top,
    double_factorial,
    falling,
    rising,
)


def test_classical_bernoulli_values():
    assert [bernoulli(m) for m in (0, 2, 4, 6, 8, 10)] == [
        1, Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30), Fraction(5, 66)]


@pytest.mark.parametrize("m", [12, 20, 30, 50])
def test_bernoulli_matches_mpmath(m):
    with mpmath.workdps(50):
        ref = mpmath.bernoulli(m)
        assert abs(mpmath.mpf(bernoulli(m).numerator) / bernoulli(m).denominator - ref) < mpmath.mpf(10) ** -40 * abs(ref)


def test_generator_identity_and_table_check():
    report = bernoulli_check(30)
    assert report.passed, str(report)


def test_corrupted_cache_is_detected(corrupted_bernoulli):
    report = bernoulli_check(10)
    assert not report.passed
    assert report.failures[0]["where"] == ("B", 2)


def test_bernoulli_sign_alternates_for_even_index():
    for j in range(1, 30):
        assert (bernoulli(2 * j) > 0) == (j % 2 == 1)


@pytest.mark.parametrize("bad", [-2, 3, 1.0, "4"])
def test_bernoulli_rejects_bad_index(bad):
    with pytest.raises(ArgumentError):
        bernoulli(bad)


def test_bernoulli_cap(monkeypatch):
    with pytest.raises(ArgumentError):
        bernoulli(12, cap=10)
    monkeypatch.setenv("VIRTEULER_BERNOULLI_CAP", "8")
    assert bernoulli_cap() == 8
    with pytest.raises(ArgumentError):
        bernoulli(10)


def test_as_rational_is_strict():
    assert as_rational("3/4") == Fraction(3, 4)
    assert as_rational(5) == 5
    with pytest.raises(ArgumentError):
        as_rational(0.5)
    with pytest.raises(ArgumentError):
        as_rational(True)


def test_double_factorial_conventions():
    assert double_factorial(-1) == 1
    assert double_factorial(0) == 1
    assert double_factorial(7) == 105
    with pytest.raises(ArgumentError):
        double_factorial(-3)


@given(st.integers(0, 40), st.integers(0, 40))
def test_binomial_agrees_with_generalised_top(n, k):
    assert binomial_rational_top(n, k) == binomial(n, k)


@given(st.fractions(max_denominator=50).filter(lambda a: abs(a) < 100), st.integers(0, 12))
def test_rising_falling_reflection(a, j):
    assert rising(a, j) == (-1) ** j * falling(-a, j)


@given(st.integers(1, 60))
def test_even_bernoulli_recurrence(m):
    # sum_{j<=m} C(m+1, j) B_j = 0 with B_1 = -1/2
    total = Fraction(1) - Fraction(m + 1, 2)
    for j in range(2, m + 1, 2):
        total += math.comb(m + 1, j) * bernoulli(j)
    assert total == 0
