from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from virteuler.errors import ArgumentError, ExtractionError, ResourceError
from virteuler.oracle import (
    EnsembleSpec,
    appendix_ode_check,
    ensemble_spec,
    genus_extract,
    moments_by_polynomials,
    moments_exact,
    norms_and_partition,
    partition_identity_check,
    rational_reconstruct,
)
from virteuler.series import Polynomial


def test_legendre_norms():
    h, Z = norms_and_partition("legendre", 3)
    assert h[:2] == [4, Fraction(16, 3)]
    assert Z == h[0] * h[1] * h[2]


@pytest.mark.parametrize("n", range(21))
def test_legendre_norm_closed_form(n):
    h, _ = norms_and_partition("legendre", n + 1)
    closed = Fraction(factorial(n) ** 4 * 2 ** (4 * n + 2), factorial(2 * n) * factorial(2 * n + 1))
    assert h[n] == closed


def test_hermite_partition():
    _, Z = norms_and_partition("hermite", 5)
    assert Z == 1 * 1 * 2 * 6 * 24


def test_partition_identities():
    assert partition_identity_check(30, tuple(range(11)), 20).passed
    with pytest.raises(ResourceError):
        partition_identity_check(60)


def test_ensemble_parsing():
    assert ensemble_spec("Laguerre(3)") == EnsembleSpec("laguerre", Fraction(3))
    with pytest.raises(ArgumentError):
        ensemble_spec("laguerre(1/2)")
    with pytest.raises(ArgumentError):
        ensemble_spec("jacobi")


def test_moment_spot_values():
    assert moments_exact("legendre", 1, 1) == Fraction(4, 3)
    for N in range(1, 51):
        assert moments_exact("legendre", 1, N) == 2 * N - Fraction(2 * N, 4 * N * N - 1)
        assert moments_exact("hermite", 0, N) == N


@settings(deadline=None, max_examples=25)
@given(st.sampled_from(["legendre", "hermite", "laguerre(0)", "laguerre(3)"]),
       st.integers(0, 4), st.integers(1, 6))
def test_two_moment_routes_agree(ensemble, k, N):
    assert moments_exact(ensemble, k, N) == moments_by_polynomials(ensemble, k, N)


@settings(deadline=None, max_examples=25)
@given(st.integers(0, 6), st.integers(1, 12))
def test_legendre_moment_bounds(k, N):
    m = moments_exact("legendre", k, N)
    assert 0 < m <= 4 ** k * N


def test_jacobi_cap(monkeypatch):
    monkeypatch.setenv("VIRTEULER_JACOBI_CAP", "10")
    with pytest.raises(ResourceError):
        moments_exact("legendre", 3, 8)


def test_genus_extract_values():
    assert genus_extract("legendre", 1, 3) == [2, Fraction(-1, 2), Fraction(-1, 8), Fraction(-1, 32)]
    assert genus_extract("legendre", 2, 1) == [6, -3]


@pytest.mark.parametrize("k", range(7))
def test_leading_genus_is_central_binomial(k):
    assert genus_extract("legendre", k, 0) == [comb(2 * k, k)]


def test_genus_extract_gaussian_harer_zagier():
    # <tr M^4> / N^2 = 2N + 1/N, <tr M^6> / N^3 = 5N + 10/N
    assert genus_extract("hermite", 2, 1) == [2, 1]
    assert genus_extract("hermite", 3, 2) == [5, 10, 0]


def test_rational_reconstruct():
    P, Q = rational_reconstruct(lambda n: Fraction(n ** 3 + 1, 2 * n * n + 3))
    # Q is normalised monic
    assert P == Polynomial([Fraction(1, 2), 0, 0, Fraction(1, 2)])
    assert Q == Polynomial([Fraction(3, 2), 0, 1])


def test_rational_reconstruct_failure_reports_residuals():
    with pytest.raises(ExtractionError) as err:
        rational_reconstruct(lambda n: Fraction(factorial(n)), max_points=6)
    assert err.value.residuals


def test_genus_extract_rejects_laguerre():
    with pytest.raises(ArgumentError):
        genus_extract("laguerre(1)", 1)


def test_appendix_identities():
    report = appendix_ode_check(8, 8, 6)
    assert report.passed, str(report)
    printed = report.meta["printed_legendre_ode"]
    assert printed[0] and printed[1] and not any(printed[n] for n in range(2, 9))
    with pytest.raises(ResourceError):
        appendix_ode_check(9)
