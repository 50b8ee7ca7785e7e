from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from virteuler.errors import ArgumentError, SequencingError
from virteuler.onept import (
    f_recursion_step,
    f_table,
    five_term_oracle_check,
    kappa_g1_sum,
    kappa_n_table,
    normalization_ratio_check,
    ode_series_solve,
    printed_top_formula_check,
    r_endpoint_checks,
    r_table,
    u_integral,
    u_to_x_convert,
)
from virteuler.oracle import genus_extract


def test_recursion_step_values():
    ones = [Fraction(1)] * 3
    assert f_recursion_step("corrected", 0, 1, ones) == Fraction(-1, 4)
    assert f_recursion_step("printed", 0, 1, ones) == Fraction(1, 2)
    row1 = f_table("corrected", 1, 2).row(1, "f")
    assert f_recursion_step("corrected", 1, 1, row1) == Fraction(-1, 16)


def test_recursion_step_needs_complete_row():
    with pytest.raises(SequencingError):
        f_recursion_step("corrected", 0, 3, [Fraction(1)] * 2)
    with pytest.raises(ArgumentError):
        f_recursion_step("other", 0, 1, [Fraction(1)] * 2)


def test_ode_table_values():
    t = ode_series_solve(2, 3)
    assert t.row(0) == [1, 2, 6, 20]
    assert t.row(1)[1:] == [Fraction(-1, 2), -3, -15]
    assert t.eps[(2, 1)] == Fraction(-1, 8)
    assert t.eps[(2, 2)] == Fraction(-15, 8)


def test_ode_and_corrected_recursion_agree():
    ode = ode_series_solve(6, 16)
    rec = f_table("corrected", 6, 16)
    assert ode.f == rec.f and ode.eps == rec.eps


def test_boundary_and_central_binomials():
    t = ode_series_solve(5, 10)
    assert all(t.f[(g, 0)] == 0 for g in range(1, 6))
    assert all(t.eps[(0, k)] == comb(2 * k, k) for k in range(11))


@settings(deadline=None, max_examples=10)
@given(st.integers(0, 2), st.integers(0, 4))
def test_ode_matches_finite_n_oracle(g, k):
    assert ode_series_solve(2, 4).eps[(g, k)] == genus_extract("legendre", k, 2)[g]


def test_r_table_values():
    t = r_table(5)
    assert t.r[(1, 0)] == 1
    assert t.r[(2, 0)] == Fraction(1, 4)
    assert t.r[(2, 1)] == Fraction(9, 4)
    assert t.r[(5, 0)] == Fraction(1, 256)
    assert (3, 3) not in t.r


def test_r_endpoints_and_printed_top_ratio():
    assert r_endpoint_checks(12).passed
    report = printed_top_formula_check(12)
    assert report.status == "expected-mismatch"
    assert set(report.meta["ratios"].values()) == {"2"}


def test_u_integral_values():
    assert [u_integral(n) for n in range(3)] == [Fraction(-1, 2), Fraction(1, 12), Fraction(-1, 60)]


@pytest.mark.parametrize("n", range(4))
def test_u_integral_matches_beta_continuation(n):
    import mpmath

    # int_R (2 sinh l)^{-2m} dl continued in m: 2^{-2m} B(m, 1/2 - m)
    m = n + 1
    ref = mpmath.power(2, -2 * m) * mpmath.beta(m, mpmath.mpf(1) / 2 - m)
    got = u_integral(n)
    assert abs(ref - mpmath.mpf(got.numerator) / got.denominator) < 1e-20


def test_kappa_n_values_and_sums():
    t = kappa_n_table(4)
    assert t.kappa[(2, 0)] == Fraction(-1, 8)
    assert t.kappa[(2, 1)] == Fraction(3, 16)
    assert t.kappa[(3, 2)] == Fraction(-15, 32)
    assert [kappa_g1_sum(g) for g in range(1, 5)] == [
        Fraction(-1, 2), Fraction(1, 16), Fraction(-1, 32), Fraction(17, 512)]


def test_kappa_sign_pattern():
    t = kappa_n_table(10)
    for (g, n), v in t.kappa.items():
        assert (v > 0) == (n % 2 == 1)


def test_u_to_x_convert():
    assert u_to_x_convert([1], 3)[1:] == [1, 6, 30]
    assert u_to_x_convert([Fraction(1, 4), Fraction(9, 4)], 2)[1:] == [Fraction(1, 4), Fraction(15, 4)]
    assert u_to_x_convert([], 2) == [0, 0, 0]


def test_normalization_ratio():
    report = normalization_ratio_check(4, 8)
    assert report.passed, str(report)


def test_five_term_variants_against_oracle():
    assert five_term_oracle_check("corrected").status == "pass"
    printed = five_term_oracle_check("printed")
    assert printed.status == "expected-mismatch"
    first = next(r for r in printed.failures if r["where"] == (1, 1))
    assert "recursion 1 " in first["detail"] and "oracle -1/2" in first["detail"]
