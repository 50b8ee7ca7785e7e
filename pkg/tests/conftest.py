from __future__ import annotations

import pytest

from virteuler import exact, tr


@pytest.fixture
def corrupted_bernoulli():
    """Overwrite the cached ``B_2`` for the duration of a test."""
    exact.bernoulli(2)
    saved = exact._even_bernoulli[1]
    exact._even_bernoulli[1] = saved + 1
    try:
        yield
    finally:
        exact._even_bernoulli[1] = saved


@pytest.fixture
def fresh_tr_cache():
    tr.clear_cache()
    yield
    tr.clear_cache()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, verdict
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(verdict(n))
