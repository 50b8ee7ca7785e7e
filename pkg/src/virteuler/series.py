"""Truncated Laurent series and dense polynomials over exact rationals.

A :class:`TruncatedSeries` stores a sparse map ``exponent -> coefficient`` and a
truncation ``order``: every exponent ``>= order`` is unknown.  ``order=None``
means the series is exact (a Laurent polynomial).  Arithmetic propagates the
tightest valid order, so a coefficient that is returned is always correct.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ArgumentError, ExpansionDepthError, ResidueError
from .exact import as_rational, binomial_rational_top

__all__ = [
    "TruncatedSeries",
    "Polynomial",
    "binomial_series",
    "log1p_series",
]

_INF = math.inf


def _min_order(*orders):
    finite = [o for o in orders if o is not None and o != _INF]
    return min(finite) if finite else None


class TruncatedSeries:
    """Laurent series ``sum c_e z^e + O(z^order)`` with rational coefficients."""

    __slots__ = ("var", "coeffs", "order")

    def __init__(self, coeffs: Mapping[int, object] | None = None, order: int | None = None,
                 var: str = "z"):
        self.var = var
        self.order = order
        clean = {}
        for e, c in (coeffs or {}).items():
            if order is not None and e >= order:
                continue
            c = as_rational(c)
            if c:
                clean[int(e)] = c
        self.coeffs = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def monomial(cls, exponent: int, coeff=1, order: int | None = None, var: str = "z"):
        return cls({exponent: coeff}, order, var)

    @classmethod
    def zero(cls, order: int | None = None, var: str = "z"):
        return cls({}, order, var)

    # -- inspection ---------------------------------------------------------
    @property
    def valuation(self):
        """Lowest exponent with a nonzero coefficient; ``order`` (or inf) if none is known."""
        if self.coeffs:
            return min(self.coeffs)
        return _INF if self.order is None else self.order

    @property
    def min_exponent(self):
        return self.valuation

    def is_exact(self) -> bool:
        return self.order is None

    def coefficient(self, e: int) -> Fraction:
        if self.order is not None and e >= self.order:
            raise ExpansionDepthError(
                f"coefficient of {self.var}^{e} requested but series is only known below {self.order}")
        return self.coeffs.get(e, Fraction(0))

    __getitem__ = coefficient

    def items(self):
        return sorted(self.coeffs.items())

    def _check(self, other: "TruncatedSeries"):
        if self.var != other.var:
            raise ArgumentError(f"series in {self.var!r} and {other.var!r} cannot be combined")

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries({0: as_rational(other)}, None, self.var)
        self._check(other)
        order = _min_order(self.order, other.order)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(out, order, self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries({e: -c for e, c in self.coeffs.items()}, self.order, self.var)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncatedSeries) else -as_rational(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        c = as_rational(c)
        return TruncatedSeries({e: c * v for e, v in self.coeffs.items()}, self.order, self.var)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        va, vb = self.valuation, other.valuation
        bounds = []
        if self.order is not None:
            bounds.append(self.order + vb)
        if other.order is not None:
            bounds.append(other.order + va)
        order = min(bounds) if bounds else None
        if order == _INF:
            order = None
        out: dict[int, Fraction] = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                e = ea + eb
                if order is not None and e >= order:
                    continue
                out[e] = out.get(e, 0) + ca * cb
        if order is not None and not isinstance(order, int):
            order = int(order)
        return TruncatedSeries(out, order, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        return self.scale(Fraction(1) / as_rational(other))

    def inverse(self, order: int | None = None) -> "TruncatedSeries":
        """Multiplicative inverse; exact inputs need an explicit ``order`` for the result."""
        if not self.coeffs:
            raise ZeroDivisionError("inverse of a series with no known nonzero coefficient")
        v = self.valuation
        lead = self.coeffs[v]
        if self.order is None:
            if order is None:
                if len(self.coeffs) == 1:
                    return TruncatedSeries({-v: 1 / lead}, None, self.var)
                raise ArgumentError("inverse of an exact non-monomial series needs a target order")
            rel = order + v
        else:
            rel = self.order - v
            if order is not None:
                rel = min(rel, order + v)
        # normalised tail h with 1 + h = self / (lead z^v), known for exponents < rel
        h = {e - v: c / lead for e, c in self.coeffs.items() if e != v and e - v < rel}
        inv = [Fraction(1)] + [Fraction(0)] * max(rel - 1, 0)
        for m in range(1, rel):
            acc = Fraction(0)
            for e, c in h.items():
                if e <= m:
                    acc += c * inv[m - e]
            inv[m] = -acc
        return TruncatedSeries({m - v: c / lead for m, c in enumerate(inv[:rel])}, rel - v, self.var)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ArgumentError("series powers must be integers")
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncatedSeries({0: 1}, None, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self) -> "TruncatedSeries":
        order = None if self.order is None else self.order - 1
        return TruncatedSeries({e - 1: e * c for e, c in self.coeffs.items() if e}, order, self.var)

    def antiderivative(self, constant=0) -> "TruncatedSeries":
        """Termwise integral; a nonzero ``z^-1`` coefficient raises :class:`ResidueError`."""
        if self.coeffs.get(-1):
            raise ResidueError(f"series has residue {self.coeffs[-1]} at {self.var}^-1")
        if self.order is not None and self.order <= -1:
            raise ResidueError("residue coefficient is beyond the truncation order")
        out = {e + 1: c / (e + 1) for e, c in self.coeffs.items()}
        out[0] = out.get(0, 0) + as_rational(constant)
        order = None if self.order is None else self.order + 1
        return TruncatedSeries(out, order, self.var)

    def residue(self) -> Fraction:
        return self.coefficient(-1)

    def truncate(self, order: int) -> "TruncatedSeries":
        new = order if self.order is None else min(order, self.order)
        return TruncatedSeries(self.coeffs, new, self.var)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``z^k``."""
        order = None if self.order is None else self.order + k
        return TruncatedSeries({e + k: c for e, c in self.coeffs.items()}, order, self.var)

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.var == other.var and self.order == other.order and self.coeffs == other.coeffs

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Equality on the common range of known exponents."""
        self._check(other)
        order = _min_order(self.order, other.order)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeffs.get(e, 0) == other.coeffs.get(e, 0)
                   for e in keys if order is None or e < order)

    def __repr__(self):
        terms = " + ".join(f"({c})*{self.var}^{e}" for e, c in self.items()) or "0"
        tail = "" if self.order is None else f" + O({self.var}^{self.order})"
        return f"TruncatedSeries({terms}{tail})"


def binomial_series(alpha, u_power: int, scale, order: int, var: str = "z") -> TruncatedSeries:
    """Expansion of ``(1 + scale * z^u_power)^alpha`` below ``z^order``.

    >>> binomial_series(Fraction(-3, 2), 2, -4, 6).items()
    [(0, Fraction(1, 1)), (2, Fraction(6, 1)), (4, Fraction(30, 1))]
    """
    if u_power < 1:
        raise ArgumentError("u_power must be >= 1")
    alpha, scale = as_rational(alpha), as_rational(scale)
    coeffs = {}
    j = 0
    while j * u_power < order:
        coeffs[j * u_power] = binomial_rational_top(alpha, j) * scale ** j
        j += 1
    # alpha a non-negative integer: the expansion terminates
    exact = alpha.denominator == 1 and alpha >= 0 and alpha * u_power < order
    return TruncatedSeries(coeffs, None if exact else order, var)


def log1p_series(order: int, var: str = "z") -> TruncatedSeries:
    """``log(1 + z)`` below ``z^order``."""
    return TruncatedSeries({k: Fraction((-1) ** (k - 1), k) for k in range(1, order)}, order, var)


class Polynomial:
    """Dense univariate polynomial; ``coeffs[i]`` multiplies ``x^i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rational(v) for v in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = c

    @classmethod
    def x(cls):
        return cls([0, 1])

    @classmethod
    def constant(cls, c):
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial -> -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def _lift(self, other):
        return other if isinstance(other, Polynomial) else Polynomial([other])

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Polynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def derivative(self, times: int = 1) -> "Polynomial":
        p = self
        for _ in range(times):
            p = Polynomial([i * c for i, c in enumerate(p.coeffs)][1:])
        return p

    def antiderivative(self) -> "Polynomial":
        return Polynomial([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def __call__(self, value):
        """Horner evaluation at a rational or a :class:`TruncatedSeries`."""
        if isinstance(value, TruncatedSeries):
            acc = TruncatedSeries({}, None, value.var)
        else:
            value = as_rational(value)
            acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def divmod(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by the zero polynomial")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - dq - 1, -1, -1):
            c = rem[i + dq] / lead
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return Polynomial([c / lead for c in self.coeffs])

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic greatest common divisor (zero if both inputs are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def integrate(self, lo, hi) -> Fraction:
        """Exact definite integral over ``[lo, hi]``."""
        F = self.antiderivative()
        return F(hi) - F(lo)

    def to_series(self, point=0, var: str = "t") -> TruncatedSeries:
        """Exact Taylor expansion ``p(point + t)``."""
        return self(TruncatedSeries({0: as_rational(point), 1: 1}, None, var))

    def __repr__(self):
        if self.is_zero():
            return "Polynomial(0)"
        return "Polynomial(" + " + ".join(f"({c})x^{i}" for i, c in enumerate(self.coeffs) if c) + ")"
