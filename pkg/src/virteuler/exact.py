"""Exact rational scalars and combinatorial kernels.

All scalars in the package are :class:`fractions.Fraction` instances, exported
here as ``Rational``.  ``Fraction`` keeps numerator and denominator reduced with
a positive denominator, so no wrapper type is needed.
"""

from __future__ import annotations

import math
import os
import threading
from fractions import Fraction

from .errors import ArgumentError

__all__ = [
    "Rational",
    "as_rational",
    "bernoulli",
    "bernoulli_cap",
    "bernoulli_check",
    "factorial",
    "double_factorial",
    "binomial",
    "rising",
    "falling",
    "binomial_rational_top",
]

Rational = Fraction

DEFAULT_BERNOULLI_CAP = 256


def bernoulli_cap() -> int:
    """Largest even index served by :func:`bernoulli` (env ``VIRTEULER_BERNOULLI_CAP``)."""
    return int(os.environ.get("VIRTEULER_BERNOULLI_CAP", DEFAULT_BERNOULLI_CAP))


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ArgumentError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ArgumentError(f"cannot convert {type(value).__name__} to an exact rational")


# B_0, B_2, B_4, ... ; index j holds B_{2j}.  Appends happen under the lock and
# a list append is atomic, so readers never see a half-written entry.
_even_bernoulli: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def _extend_bernoulli(upto: int) -> None:
    with _bernoulli_lock:
        while len(_even_bernoulli) <= upto:
            m = 2 * len(_even_bernoulli)
            # sum_{j=0}^{m} C(m+1, j) B_j = 0 with B_1 = -1/2, odd B_j = 0 beyond
            acc = Fraction(-(m + 1), 2)
            for j, b in enumerate(_even_bernoulli):
                acc += math.comb(m + 1, 2 * j) * b
            _even_bernoulli.append(-acc / (m + 1))


def bernoulli(m: int, cap: int | None = None) -> Fraction:
    """Even-index Bernoulli number ``B_m`` with ``x/(e^x - 1) = sum B_m x^m / m!``.

    Parameters
    ----------
    m : int
        Even, ``0 <= m <= cap``.
    cap : int, optional
        Upper bound on ``m``; defaults to :func:`bernoulli_cap`.

    Examples
    --------
    >>> bernoulli(2), bernoulli(10)
    (Fraction(1, 6), Fraction(5, 66))
    """
    if cap is None:
        cap = bernoulli_cap()
    if not isinstance(m, int) or m < 0 or m % 2:
        raise ArgumentError(f"bernoulli index must be a non-negative even integer, got {m!r}")
    if m > cap:
        raise ArgumentError(f"bernoulli index {m} exceeds cap {cap}")
    j = m // 2
    if j >= len(_even_bernoulli):
        _extend_bernoulli(j)
    return _even_bernoulli[j]


PRINTED_BERNOULLI = {2: Fraction(1, 6), 4: Fraction(-1, 30), 6: Fraction(1, 42),
                     8: Fraction(-1, 30), 10: Fraction(5, 66)}


def bernoulli_check(order: int = 30):
    """Compare the cached table with the classical values and the generator identity.

    The identity is ``(x / (e^x - 1)) * ((e^x - 1) / x) = 1`` through ``x^order``,
    with ``B_1 = -1/2`` supplied explicitly.
    """
    from .reports import CheckReport

    report = CheckReport("bernoulli")
    for m, value in PRINTED_BERNOULLI.items():
        got = bernoulli(m)
        report.record(("B", m), got == value, f"B_{m} = {got}, expected {value}")
    b = [bernoulli(m) if m % 2 == 0 else Fraction(0) for m in range(order + 1)]
    if order >= 1:
        b[1] = Fraction(-1, 2)
    for n in range(order + 1):
        # coefficient of x^n in sum B_m x^m / m! * sum x^j / (j+1)!
        acc = sum((b[m] / math.factorial(m) / math.factorial(n - m + 1) for m in range(n + 1)), Fraction(0))
        report.record(("generator", n), acc == (1 if n == 0 else 0), f"x^{n} coefficient {acc}")
    return report


def factorial(n: int) -> int:
    if n < 0:
        raise ArgumentError(f"factorial of negative integer {n}")
    return math.factorial(n)


def double_factorial(n: int) -> int:
    """``n!!`` with ``0!! = (-1)!! = 1``."""
    if n < -1:
        raise ArgumentError(f"double factorial undefined for {n}")
    out = 1
    for k in range(n, 0, -2):
        out *= k
    return out


def binomial(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise ArgumentError(f"binomial({n}, {k}) needs non-negative arguments")
    return math.comb(n, k)


def rising(a, j: int) -> Fraction:
    """Rising product ``a (a+1) ... (a+j-1)``."""
    if j < 0:
        raise ArgumentError("rising product length must be non-negative")
    a = as_rational(a)
    out = Fraction(1)
    for i in range(j):
        out *= a + i
    return out


def falling(a, j: int) -> Fraction:
    """Falling product ``a (a-1) ... (a-j+1)``."""
    if j < 0:
        raise ArgumentError("falling product length must be non-negative")
    a = as_rational(a)
    out = Fraction(1)
    for i in range(j):
        out *= a - i
    return out


def binomial_rational_top(alpha, j: int) -> Fraction:
    """Generalised binomial coefficient ``alpha (alpha-1) ... (alpha-j+1) / j!``."""
    return falling(alpha, j) / math.factorial(j)
