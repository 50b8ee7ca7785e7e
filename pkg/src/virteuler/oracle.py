"""Exact finite-N ground truth from monic orthogonal polynomials.

Every ensemble is described by its monic three-term recurrence

    x p_i = p_{i+1} + a_i p_i + b_i p_{i-1},    h_i = h_{i-1} b_i,

and by its moment functional.  Moments ``<tr M^{2k}>`` at finite ``N`` are
diagonal sums of powers of the truncated Jacobi matrix; a second route through
the explicit polynomials and the moment functional is provided for
cross-checking.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Sequence, Tuple

from .errors import ArgumentError, ExtractionError, ResourceError, VerificationError
from .exact import as_rational, double_factorial
from .onept import ODE_L0, ODE_M, apply_operator
from .reports import CheckReport
from .series import Polynomial, TruncatedSeries

__all__ = [
    "EnsembleSpec",
    "ensemble_spec",
    "jacobi_matrix",
    "norms_and_partition",
    "barnes_g",
    "partition_identity_check",
    "moments_exact",
    "moments_by_polynomials",
    "rational_reconstruct",
    "genus_extract",
    "monic_polynomials",
    "appendix_ode_check",
]

DEFAULT_JACOBI_CAP = 1024


def jacobi_cap() -> int:
    """Largest Jacobi-matrix dimension (env ``VIRTEULER_JACOBI_CAP``)."""
    return int(os.environ.get("VIRTEULER_JACOBI_CAP", DEFAULT_JACOBI_CAP))


@dataclass(frozen=True)
class EnsembleSpec:
    """A weight given by its monic recurrence and moment functional.

    ``legendre``: uniform weight on ``[-2, 2]``.  ``hermite``: ``e^{-x^2/2}/sqrt(2 pi)``
    on the real line.  ``laguerre``: ``x^a e^{-x}`` on ``[0, inf)`` with integer ``a >= 0``.
    """

    name: str
    a: Fraction | None = None

    def __post_init__(self):
        if self.name not in ("legendre", "hermite", "laguerre"):
            raise ArgumentError(f"unknown ensemble {self.name!r}")
        if self.name == "laguerre":
            if self.a is None or self.a < 0 or Fraction(self.a).denominator != 1:
                raise ArgumentError("laguerre needs an integer parameter a >= 0")

    @property
    def label(self) -> str:
        return f"laguerre({self.a})" if self.name == "laguerre" else self.name

    @property
    def support(self) -> str:
        return {"legendre": "[-2, 2]", "hermite": "(-inf, inf)", "laguerre": "[0, inf)"}[self.name]

    @property
    def symmetric(self) -> bool:
        return self.name != "laguerre"

    def diag(self, i: int) -> Fraction:
        if self.name == "laguerre":
            return Fraction(2 * i + 1) + self.a
        return Fraction(0)

    def b(self, i: int) -> Fraction:
        if i < 1:
            raise ArgumentError("b_i is defined for i >= 1")
        if self.name == "legendre":
            return Fraction(4 * i * i, 4 * i * i - 1)
        if self.name == "hermite":
            return Fraction(i)
        return i * (i + self.a)

    def moment(self, m: int) -> Fraction:
        """The moment functional applied to ``x^m``."""
        if m < 0:
            raise ArgumentError("moment order must be non-negative")
        if self.name == "legendre":
            return Fraction(0) if m % 2 else Fraction(2 * 2 ** (m + 1), m + 1)
        if self.name == "hermite":
            return Fraction(0) if m % 2 else Fraction(double_factorial(m - 1))
        return Fraction(factorial(m + int(self.a)))

    def genus_scaling(self, k: int) -> int:
        """Power of ``N`` removed from ``<tr M^{2k}>`` so the leading order is ``N^1``."""
        return k if self.name == "hermite" else 0


_LAGUERRE = re.compile(r"^laguerre[(:\s]\s*(-?\d+(?:/\d+)?)\s*\)?$")


def ensemble_spec(value) -> EnsembleSpec:
    """Accept an :class:`EnsembleSpec`, ``"legendre"``, ``"hermite"`` or ``"laguerre(a)"``."""
    if isinstance(value, EnsembleSpec):
        return value
    text = str(value).strip().lower()
    if text in ("legendre", "hermite"):
        return EnsembleSpec(text)
    match = _LAGUERRE.match(text)
    if match:
        return EnsembleSpec("laguerre", as_rational(match.group(1)))
    raise ArgumentError(f"unknown ensemble {value!r}")


def jacobi_matrix(ensemble, dim: int) -> List[Dict[int, Fraction]]:
    """Truncated monic Jacobi matrix as sparse rows (superdiagonal 1, subdiagonal ``b_i``)."""
    spec = ensemble_spec(ensemble)
    if dim > jacobi_cap():
        raise ResourceError(f"Jacobi dimension {dim} exceeds cap {jacobi_cap()}")
    rows = []
    for i in range(dim):
        row = {}
        if spec.diag(i):
            row[i] = spec.diag(i)
        if i + 1 < dim:
            row[i + 1] = Fraction(1)
        if i >= 1:
            row[i - 1] = spec.b(i)
        rows.append(row)
    return rows


def norms_and_partition(ensemble, N: int) -> Tuple[List[Fraction], Fraction]:
    """Norms ``h_0 .. h_{N-1}`` and ``Z = prod h_n``."""
    spec = ensemble_spec(ensemble)
    if N < 1:
        raise ArgumentError("N must be >= 1")
    h = [spec.moment(0)]
    for i in range(1, N):
        h.append(h[-1] * spec.b(i))
    Z = Fraction(1)
    for v in h:
        Z *= v
    return h, Z


def barnes_g(m: int) -> int:
    """``G(m)`` for integer ``m >= 1``: ``G(m+1) = prod_{k <= m-1} k!``."""
    if m < 1:
        raise ArgumentError("Barnes G is only tabulated at positive integers")
    out = 1
    for k in range(m - 1):
        out *= factorial(k)
    return out


def partition_identity_check(N_max: int = 30, laguerre_a: Sequence[int] = tuple(range(11)),
                             laguerre_N_max: int = 20, strict: bool = True) -> CheckReport:
    """Exact Barnes-G closed forms for the Legendre, Laguerre and Hermite partition functions.

    Legendre and Hermite run for ``N <= N_max``; Laguerre for every ``a`` in
    ``laguerre_a`` and ``N <= laguerre_N_max``.
    """
    if max(N_max, laguerre_N_max) > 50:
        raise ResourceError("partition_identity_check is capped at N = 50")
    report = CheckReport("partition_identity")
    for N in range(1, max(N_max, laguerre_N_max) + 1):
        _, Z = norms_and_partition("legendre", N)
        closed = Fraction(barnes_g(N + 1) ** 4 * 2 ** (2 * N * N), barnes_g(2 * N + 1))
        if N <= N_max:
            report.record(("legendre", N), Z == closed, f"{Z} vs {closed}")
        for a in (laguerre_a if N <= laguerre_N_max else ()):
            _, Z = norms_and_partition(EnsembleSpec("laguerre", Fraction(a)), N)
            gammas = Fraction(barnes_g(a + N + 1), barnes_g(a + 1))
            report.record((f"laguerre({a})", N), Z == barnes_g(N + 1) * gammas,
                          f"{Z} vs G(N+1) G(a+N+1)/G(a+1)")
        _, Z = norms_and_partition("hermite", N)
        if N <= N_max:
            report.record(("hermite", N), Z == barnes_g(N + 1), f"{Z} vs G(N+1)")
    if strict and not report.passed:
        raise VerificationError("partition identity failed", report.failures[0]["where"])
    return report


def _band_apply(rows, vec: Dict[int, Fraction], transpose: bool) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    if transpose:
        for i, v in vec.items():
            for j, c in rows[i].items():
                out[j] = out.get(j, 0) + v * c
    else:
        dim = len(rows)
        for j, v in vec.items():
            for i in (j - 1, j, j + 1):
                if 0 <= i < dim and j in rows[i]:
                    out[i] = out.get(i, 0) + rows[i][j] * v
    return out


def moments_exact(ensemble, k: int, N: int) -> Fraction:
    """``<tr M^{2k}> = sum_{i<N} (J^{2k})_{ii}`` from the ``(N+k+1)``-dimensional Jacobi matrix."""
    spec = ensemble_spec(ensemble)
    if k < 0 or N < 1:
        raise ArgumentError("need k >= 0 and N >= 1")
    rows = jacobi_matrix(spec, N + k + 1)
    total = Fraction(0)
    for i in range(N):
        col = {i: Fraction(1)}
        row = {i: Fraction(1)}
        for _ in range(k):
            col = _band_apply(rows, col, transpose=False)
            row = _band_apply(rows, row, transpose=True)
        total += sum(v * col.get(j, 0) for j, v in row.items())
    return total


def monic_polynomials(ensemble, n_max: int) -> List[Polynomial]:
    """Monic ``p_0 .. p_{n_max}`` from the three-term recurrence."""
    spec = ensemble_spec(ensemble)
    x = Polynomial.x()
    polys = [Polynomial.constant(1)]
    if n_max >= 1:
        polys.append(x - spec.diag(0))
    for i in range(1, n_max):
        polys.append((x - spec.diag(i)) * polys[i] - spec.b(i) * polys[i - 1])
    return polys[: n_max + 1]


def _functional(spec: EnsembleSpec, poly: Polynomial) -> Fraction:
    return sum((c * spec.moment(m) for m, c in enumerate(poly.coeffs) if c), Fraction(0))


def moments_by_polynomials(ensemble, k: int, N: int) -> Fraction:
    """Independent route: ``sum_{i<N} L(x^{2k} p_i^2) / L(p_i^2)`` with the moment functional ``L``."""
    spec = ensemble_spec(ensemble)
    polys = monic_polynomials(spec, N - 1)
    x2k = Polynomial([0] * (2 * k) + [1])
    total = Fraction(0)
    for p in polys:
        sq = p * p
        total += _functional(spec, x2k * sq) / _functional(spec, sq)
    return total


# -- genus extraction ------------------------------------------------------------


def rational_reconstruct(f, start: int = 1, max_points: int = 64, holdout: int = 3
                         ) -> Tuple[Polynomial, Polynomial]:
    """Find ``P/Q`` with ``f(N) = P(N)/Q(N)`` by Thiele continued-fraction interpolation.

    Points ``N = start, start+1, ...`` are added until the interpolant predicts
    the next ``holdout`` values exactly.  Raises :class:`ExtractionError` with the
    last residuals when ``max_points`` is reached.
    """
    xs: List[Fraction] = []
    phi: List[List[Fraction]] = []  # phi[i][j] = j-th inverse difference at x_i
    coef: List[Fraction] = []
    residuals: list = []
    cache: Dict[int, Fraction] = {}

    def value(n):
        if n not in cache:
            cache[n] = as_rational(f(n))
        return cache[n]

    def evaluate(x):
        acc = coef[-1]
        for j in range(len(coef) - 2, -1, -1):
            if acc == 0:
                return None
            acc = coef[j] + (x - xs[j]) / acc
        return acc

    n = start
    while len(xs) < max_points:
        x = Fraction(n)
        row = [value(n)]
        degenerate = False
        for j in range(len(xs)):
            diff = row[j] - phi[j][j]
            if diff == 0:
                degenerate = True
                break
            row.append((x - xs[j]) / diff)
        n += 1
        if degenerate:
            continue
        xs.append(x)
        phi.append(row)
        coef.append(row[-1])
        checks = [(m, evaluate(Fraction(m)), value(m)) for m in range(n, n + holdout)]
        residuals = [(m, None if got is None else want - got) for m, got, want in checks]
        if all(got is not None and got == want for _, got, want in checks):
            P, Q = Polynomial.constant(coef[-1]), Polynomial.constant(1)
            for j in range(len(coef) - 2, -1, -1):
                # coef[j] + (x - x_j) Q / P
                shift = Polynomial([-xs[j], 1])
                P, Q = coef[j] * P + shift * Q, P
            g = P.gcd(Q)
            if g.degree > 0:
                P, Q = P // g, Q // g
            lead = Q.coeffs[-1]
            return P * (1 / lead), Q * (1 / lead)
    raise ExtractionError(f"no rational form found with {max_points} points", residuals)


def _expand_at_infinity(P: Polynomial, Q: Polynomial, order: int) -> TruncatedSeries:
    """``P(N)/Q(N)`` as a series in ``t = 1/N`` known for exponents below ``order``."""
    p, q = P.degree, Q.degree
    num = TruncatedSeries({p - i: c for i, c in enumerate(P.coeffs)}, None, "t")
    den = TruncatedSeries({q - i: c for i, c in enumerate(Q.coeffs)}, None, "t")
    inv = den.inverse(order + 2 * q + 2)
    return (num * inv).shift(q - p).truncate(order)


def genus_extract(ensemble, k: int, g_max: int = 4, holdout: int = 3) -> List[Fraction]:
    """Coefficients ``eps_g(k)`` of ``N^{1-2g}``, ``g = 0..g_max``, in the scaled moment.

    The scaled moment ``N^{-s} <tr M^{2k}>`` is reconstructed as an exact rational
    function of ``N`` (validated on ``holdout`` unused sample points) and expanded
    at ``N = inf``.  The expansion must start at ``N^1`` with only odd powers.
    """
    spec = ensemble_spec(ensemble)
    if not spec.symmetric:
        raise ArgumentError("genus extraction needs a symmetric ensemble")
    if g_max < 0 or k < 0:
        raise ArgumentError("need k >= 0 and g_max >= 0")
    s = spec.genus_scaling(k)
    P, Q = rational_reconstruct(lambda n: moments_exact(spec, k, n) / Fraction(n) ** s,
                                holdout=holdout, max_points=8 * k + 16)
    series = _expand_at_infinity(P, Q, 2 * g_max + 1)
    bad = [(e, c) for e, c in series.items() if e < -1 or e % 2 == 0]
    if bad:
        raise ExtractionError("expansion is not supported on odd powers N^{1-2g}", bad)
    return [series.coefficient(2 * g - 1) for g in range(g_max + 1)]


# -- differential identities -----------------------------------------------------


def _legendre_standard(N: int) -> List[Polynomial]:
    """``L_n(x) = P_n(x/2)`` for ``n <= N`` (standard normalisation ``L_n(2) = 1``)."""
    polys = monic_polynomials("legendre", N)
    return [p * Fraction(comb(2 * n, n), 4 ** n) for n, p in enumerate(polys)]


def appendix_ode_check(N_max: int = 8, k_max: int = 8, five_term_N_max: int = 6,
                       strict: bool = True) -> CheckReport:
    """Polynomial identities behind the third-order ODE, and the ODE on finite-N data.

    * the Legendre equation ``(x^2-4) L'' + 2x L' - n(n+1) L = 0`` on ``[-2, 2]``;
    * ``Q' = 2N L_N L_{N-1}`` for ``Q = (x^2-4)(L_N' L_{N-1} - L_{N-1}' L_N)``;
    * the fourth-order equation on ``Q``;
    * ``M`` annihilates the planar series ``sum C(2k,k) x^{-2k-1}``;
    * the third-order ODE on ``W_1 = sum_k <tr M^{2k}> x^{-2k-1}`` for exponents
      ``>= -2 k_max - 1`` and ``N <= five_term_N_max``.

    ``meta['printed_legendre_ode']`` records whether the variant with the signs
    ``(x^2-4) L'' - 2x L' + n(n+1) L`` holds (it does not for ``n >= 2``).
    """
    if max(N_max, five_term_N_max) > 8:
        raise ResourceError("appendix_ode_check is capped at N = 8")
    report = CheckReport("appendix_ode")
    x = Polynomial.x()
    x2m4 = x * x - 4
    L = _legendre_standard(N_max)
    printed_holds = {}
    for n in range(N_max + 1):
        Ln = L[n]
        lhs = x2m4 * Ln.derivative(2) + 2 * x * Ln.derivative() - n * (n + 1) * Ln
        report.record(("legendre_ode", n), lhs.is_zero(), "correct-sign Legendre equation")
        printed = x2m4 * Ln.derivative(2) - 2 * x * Ln.derivative() + n * (n + 1) * Ln
        printed_holds[n] = printed.is_zero()
    report.meta["printed_legendre_ode"] = printed_holds

    for N in range(1, N_max + 1):
        LN, LM = L[N], L[N - 1]
        Q = x2m4 * (LN.derivative() * LM - LM.derivative() * LN)
        report.record(("Q_prime", N), Q.derivative() == 2 * N * LN * LM, "Q' = 2N L_N L_{N-1}")
        q4 = (x2m4 * x2m4 * Q.derivative(4) + 6 * x * x2m4 * Q.derivative(3)
              + (6 * x * x - 8) * Q.derivative(2)
              - 4 * N * N * (x2m4 * Q.derivative(2) + x * Q.derivative() - Q))
        report.record(("Q4", N), q4.is_zero(), f"residual {q4}" if not q4.is_zero() else "exact")

    planar = {-2 * k - 1: Fraction(comb(2 * k, k)) for k in range(k_max + 1)}
    image = apply_operator(ODE_M, planar)
    stray = {e: c for e, c in image.items() if e >= -2 * k_max - 1}
    report.record(("planar",), not stray, f"residual {stray}" if stray else "annihilated")

    for N in range(1, five_term_N_max + 1):
        w = {-2 * k - 1: moments_exact("legendre", k, N) for k in range(k_max + 1)}
        res = apply_operator(ODE_L0, w)
        for e, c in apply_operator(ODE_M, w).items():
            res[e] = res.get(e, 0) - 4 * (N * N - 1) * c
        stray = {e: c for e, c in res.items() if c and e >= -2 * k_max - 1}
        report.record(("five_term", N), not stray,
                      f"coefficient x^{min(stray)} = {stray[min(stray)]}" if stray else "exact")
    if strict and not report.passed:
        raise VerificationError("appendix identity failed", report.failures[0]["where"])
    return report
