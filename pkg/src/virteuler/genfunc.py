"""Free energies from Barnes-G asymptotics and the t0-derivative route to kappa.

Each genus term of a free energy is a :class:`FreeEnergy`: a finite sum of
``c t0^m`` and ``c t0^m log t0`` plus named constants.  That class is closed under
``d/dt0``, so ``kappa_{g,s} = (-1)^s / s! * d^s F_g / dt0^s |_{t0=1}`` is computed
exactly.  Constants (``log 2pi``, ``zeta'(-1)``, ``log 2``) stay symbolic except in
:func:`barnes_numeric_check`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Tuple

from .errors import ArgumentError, DomainError, PrecisionError, VerificationError
from .exact import as_rational, bernoulli, binomial_rational_top
from .reports import CheckReport
from .series import TruncatedSeries, binomial_series, log1p_series

__all__ = [
    "FreeEnergy",
    "KappaTable",
    "ROUTES",
    "CONVENTIONS",
    "barnes_genus_terms",
    "legendre_genus_terms",
    "goe_phi",
    "kappa_sw",
    "kappa_sw_route",
    "kappa_closed_gaussian",
    "kappa_legendre_stated",
    "kappa_goe_nonorientable",
    "goe_shift_identity_check",
    "penner_shift_check",
    "reconcile_conventions",
    "barnes_numeric_check",
]

ROUTES = ("sw-route", "closed-form", "stated-lemma", "onept-chain", "tr-chain")
CONVENTIONS = ("lemma", "penner")
CONSTANTS = ("log 2pi", "zeta'(-1)", "log 2")


@dataclass
class FreeEnergy:
    """Genus term ``sum_m a_m t0^m + sum_m b_m t0^m log t0 + constants``.

    ``two_g`` is twice the genus so that half-integer genera stay integral.
    ``n_terms`` records the ``N``-dependent pieces split off by ``z = t0 N``;
    they never influence t0-derivatives of order above two.
    """

    two_g: int
    powers: Dict[int, Fraction] = field(default_factory=dict)
    log_terms: Dict[int, Fraction] = field(default_factory=dict)
    constants: Dict[str, Fraction] = field(default_factory=dict)
    n_terms: Dict[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.powers = {m: Fraction(c) for m, c in self.powers.items() if c}
        self.log_terms = {m: Fraction(c) for m, c in self.log_terms.items() if c}
        for name in self.constants:
            if name not in CONSTANTS:
                raise ArgumentError(f"unknown named constant {name!r}")

    @property
    def log_coefficient(self) -> Fraction:
        """Coefficient of ``log t0``."""
        return self.log_terms.get(0, Fraction(0))

    @property
    def sqlog_coefficient(self) -> Fraction:
        """Coefficient of ``t0^2 log t0``."""
        return self.log_terms.get(2, Fraction(0))

    def derivative(self, times: int = 1) -> "FreeEnergy":
        powers, logs = dict(self.powers), dict(self.log_terms)
        for _ in range(times):
            new_p: Dict[int, Fraction] = {}
            new_l: Dict[int, Fraction] = {}
            for m, c in powers.items():
                if m:
                    new_p[m - 1] = new_p.get(m - 1, 0) + m * c
            for m, c in logs.items():
                # d(t^m log t) = m t^(m-1) log t + t^(m-1)
                if m:
                    new_l[m - 1] = new_l.get(m - 1, 0) + m * c
                new_p[m - 1] = new_p.get(m - 1, 0) + c
            powers, logs = new_p, new_l
        return FreeEnergy(self.two_g, powers, logs)

    def at_one(self) -> Fraction:
        """Value at ``t0 = 1`` without the named constants (``log 1 = 0``)."""
        return sum(self.powers.values(), Fraction(0))

    def derivative_at_one(self, s: int) -> Fraction:
        return self.derivative(s).at_one()

    def shift_expansion(self, order: int, var: str = "h"):
        """``F(t0 (1+h)) - F(t0)`` as ``({m: series}, {m: series})``.

        The first map holds the coefficient series of ``t0^m``, the second that
        of ``t0^m log t0``; both are truncated below ``h^order``.
        """
        plain: Dict[int, TruncatedSeries] = {}
        logs: Dict[int, TruncatedSeries] = {}
        log1p = log1p_series(order, var)
        for m, c in self.powers.items():
            s = (binomial_series(m, 1, 1, order, var) - 1).scale(c)
            plain[m] = plain.get(m, TruncatedSeries({}, None, var)) + s
        for m, c in self.log_terms.items():
            grow = binomial_series(m, 1, 1, order, var)
            plain[m] = plain.get(m, TruncatedSeries({}, None, var)) + (grow * log1p).scale(c)
            logs[m] = logs.get(m, TruncatedSeries({}, None, var)) + (grow - 1).scale(c)
        return plain, logs


@dataclass
class KappaTable:
    """``kappa`` values keyed by ``(2g, s)`` with the route that produced them."""

    ensemble: str
    route: str
    convention: str = "lemma"
    entries: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ArgumentError(f"unknown route {self.route!r}")
        for two_g, s in self.entries:
            if two_g - 2 + s <= 0:
                raise DomainError("unstable entry in kappa table", (Fraction(two_g, 2), s))

    def value(self, g, s: int) -> Fraction:
        return self.entries[(int(2 * as_rational(g)), s)]

    def sorted_entries(self):
        return sorted(self.entries.items())

    def to_json(self) -> str:
        doc = {
            "ensemble": self.ensemble,
            "route": self.route,
            "convention": self.convention,
            "entries": [{"two_g": tg, "s": s, "value": f"{v.numerator}/{v.denominator}"}
                        for (tg, s), v in self.sorted_entries()],
            "meta": self.meta,
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "KappaTable":
        doc = json.loads(text)
        entries = {(e["two_g"], e["s"]): Fraction(e["value"]) for e in doc["entries"]}
        return cls(doc["ensemble"], doc["route"], doc["convention"], entries, doc.get("meta", {}))

    def to_csv(self) -> str:
        rows = ["two_g,s,value"]
        rows += [f"{tg},{s},{v.numerator}/{v.denominator}" for (tg, s), v in self.sorted_entries()]
        return "\n".join(rows) + "\n"

    def __eq__(self, other):
        if not isinstance(other, KappaTable):
            return NotImplemented
        return (self.ensemble, self.route, self.convention, self.entries) == (
            other.ensemble, other.route, other.convention, other.entries)


def barnes_genus_terms(g_max: int) -> List[FreeEnergy]:
    """Genus terms of ``log G(t0 N + 1)`` for ``g = 0..g_max``."""
    out = [FreeEnergy(0, {2: Fraction(-3, 4)}, {2: Fraction(1, 2)},
                      n_terms={"t0^2 log N": Fraction(1, 2), "N t0 log 2pi": Fraction(1, 2)})]
    if g_max >= 1:
        out.append(FreeEnergy(2, {}, {0: Fraction(-1, 12)}, {"zeta'(-1)": Fraction(1)},
                              n_terms={"log N": Fraction(-1, 12)}))
    for g in range(2, g_max + 1):
        out.append(FreeEnergy(2 * g, {2 - 2 * g: bernoulli(2 * g) / (4 * (g - 1) * g)}))
    return out


def legendre_genus_terms(g_max: int) -> List[FreeEnergy]:
    """Genus terms of ``log Z_Leg(t0 N) = 4 log G(z+1) + 2 z^2 log 2 - log G(2z+1)``.

    The planar term cancels identically.
    """
    out = [FreeEnergy(0, n_terms={"N t0 log 2pi": Fraction(1)})]
    if g_max >= 1:
        out.append(FreeEnergy(2, {}, {0: Fraction(-1, 4)},
                              {"zeta'(-1)": Fraction(3), "log 2": Fraction(1, 12)},
                              n_terms={"log N": Fraction(-1, 4)}))
    for g in range(2, g_max + 1):
        c = bernoulli(2 * g) / ((g - 1) * g) * (1 - Fraction(1, 2 ** (2 * g)))
        out.append(FreeEnergy(2 * g, {2 - 2 * g: c}))
    return out


def goe_phi(k_max: int, drop: int | None = None) -> FreeEnergy:
    """``Phi(u) = (u/2) log u - sum_k (2^{2k-1}-1)/(2k(2k-1)) B_{2k} u^{1-2k}``.

    ``drop`` removes one ``k`` term (negative control).
    """
    powers = {}
    for k in range(1, k_max + 1):
        if k == drop:
            continue
        powers[1 - 2 * k] = -Fraction(2 ** (2 * k - 1) - 1, 2 * k * (2 * k - 1)) * bernoulli(2 * k)
    return FreeEnergy(1, powers, {1: Fraction(1, 2)})


def _convention_sign(convention: str, s: int) -> int:
    if convention == "lemma":
        return (-1) ** s
    if convention == "penner":
        return 1
    raise ArgumentError(f"unknown sign convention {convention!r}")


def kappa_sw(F: FreeEnergy, s: int, convention: str = "lemma") -> Fraction:
    """``sign * d^s F / dt0^s / s!`` at ``t0 = 1`` for one genus term."""
    if s < 1 or F.two_g - 2 + s <= 0:
        raise DomainError("unstable pair", (Fraction(F.two_g, 2), s))
    return _convention_sign(convention, s) * F.derivative_at_one(s) / factorial(s)


def kappa_sw_route(terms: List[FreeEnergy], s_max: int, convention: str = "lemma",
                   ensemble: str = "") -> KappaTable:
    """All stable ``kappa_{g,s}``, ``s <= s_max``, from a list of genus terms."""
    entries = {}
    for F in terms:
        for s in range(1, s_max + 1):
            if F.two_g - 2 + s > 0:
                entries[(F.two_g, s)] = kappa_sw(F, s, convention)
    return KappaTable(ensemble, "sw-route", convention, entries)


def kappa_closed_gaussian(g: int, s: int) -> Fraction:
    """Closed forms for oriented surfaces, signs as printed."""
    if g < 0 or s < 1 or 2 * g - 2 + s <= 0:
        raise DomainError("unstable pair", (g, s))
    if g == 0:
        return Fraction(factorial(s - 3), factorial(s))
    return (bernoulli(2 * g) * factorial(2 * g + s - 3)
            / (factorial(s) * factorial(2 * g - 2) * 2 * g) * (-1) ** s)


def kappa_legendre_stated(g: int) -> Fraction:
    """``kappa_{g,1}`` for the Legendre ensemble, signs as printed."""
    if g < 1:
        raise DomainError("Legendre kappa_{g,1} needs g >= 1", (g, 1))
    if g == 1:
        return Fraction(-1, 4)
    return -2 * bernoulli(2 * g) / g * (1 - Fraction(1, 2 ** (2 * g)))


def kappa_goe_nonorientable(g, s: int) -> Fraction:
    """Non-orientable addition at half-integer genus ``g``.

    ``g = 1/2`` comes from ``(t0/2)(1+h) log(1+h)``; ``g = k + 1/2`` from the
    ``B_{2k}`` term.
    """
    g = as_rational(g)
    two_g = 2 * g
    if two_g.denominator != 1 or two_g.numerator % 2 == 0 or two_g < 1:
        raise DomainError("non-orientable kappa needs half-integer genus", (g, s))
    two_g = int(two_g)
    if s < 1 or two_g - 2 + s <= 0:
        raise DomainError("unstable pair", (g, s))
    if two_g == 1:
        # h^s coefficient of (1/2)(1+h)log(1+h), s >= 2
        return Fraction((-1) ** s, 2 * s * (s - 1))
    k = (two_g - 1) // 2
    c = Fraction(2 ** (2 * k - 1) - 1, 2 * k * (2 * k - 1)) * bernoulli(2 * k)
    return -c * binomial_rational_top(1 - 2 * k, s)


def goe_shift_identity_check(two_g_max: int = 9, s_max: int = 8, phi: FreeEnergy | None = None) -> CheckReport:
    """Compare the non-orientable series with the shift ``Phi(t0(1+h)) - Phi(t0)``.

    The ``t0 log t0`` part of the shift must be exactly ``(h/2) t0 log t0``; every
    ``t0^{2-2g} h^s`` coefficient must equal :func:`kappa_goe_nonorientable`.
    """
    k_max = (two_g_max - 1) // 2
    if phi is None:
        phi = goe_phi(k_max)
    plain, logs = phi.shift_expansion(s_max + 1)
    report = CheckReport("goe_shift_identity")
    correction = TruncatedSeries({1: Fraction(1, 2)}, None, "h")
    log_part = logs.get(1, TruncatedSeries({}, None, "h"))
    report.record(("log t0",), log_part.agrees_with(correction), f"t0 log t0 part {log_part}")
    report.record(("support",), all(m % 2 for m in plain), f"t0 powers {sorted(plain)}")
    for two_g in range(1, two_g_max + 1, 2):
        series = plain.get(2 - two_g, TruncatedSeries({}, None, "h"))
        for s in range(1, s_max + 1):
            if two_g - 2 + s <= 0:
                continue
            want = kappa_goe_nonorientable(Fraction(two_g, 2), s)
            got = series.coefficient(s)
            report.record((two_g, s), got == want, f"shift {got} vs series {want}")
    return report


def penner_shift_check(g_max: int, s_max: int, ensemble: str = "gaussian") -> CheckReport:
    """Taylor identity ``F_g(1+h) - F_g(1) = sum_s h^s/s! F_g^{(s)}(1)`` per genus.

    The left side comes from series composition, the right from exact
    derivatives.  The resulting table uses the ``penner`` convention.
    """
    terms = barnes_genus_terms(g_max) if ensemble == "gaussian" else legendre_genus_terms(g_max)
    report = CheckReport(f"penner_shift[{ensemble}]")
    entries = {}
    for F in terms:
        plain, _ = F.shift_expansion(s_max + 1)
        total = TruncatedSeries({}, None, "h")
        for series in plain.values():
            total = total + series
        for s in range(1, s_max + 1):
            coeff = total.coefficient(s)
            deriv = F.derivative_at_one(s) / factorial(s)
            report.record((F.two_g, s), coeff == deriv, f"composition {coeff} vs derivative {deriv}")
            if F.two_g - 2 + s > 0:
                entries[(F.two_g, s)] = coeff
    report.meta["table"] = KappaTable(ensemble, "sw-route", "penner", entries)
    return report


def reconcile_conventions(ensemble: str, g_max: int, s_max: int = 8, strict: bool = True) -> CheckReport:
    """Assert the exact ratios between routes whose printed signs disagree.

    gaussian: sw-route = (-1)^s closed form for g >= 1, = -closed form for g = 0.
    legendre: stated value = -sw-route, one-point sums = -2 sw-route (s = 1).
    """
    report = CheckReport(f"reconcile[{ensemble}]")
    if ensemble == "gaussian":
        sw = kappa_sw_route(barnes_genus_terms(g_max), s_max)
        for (two_g, s), v in sw.sorted_entries():
            g = two_g // 2
            closed = kappa_closed_gaussian(g, s)
            factor = -1 if g == 0 else (-1) ** s
            report.record((g, s), v == factor * closed, f"sw {v} vs closed {closed} (factor {factor})")
    elif ensemble == "legendre":
        from .onept import kappa_g1_sum

        sw = kappa_sw_route(legendre_genus_terms(g_max), 1)
        for g in range(1, g_max + 1):
            v = sw.entries[(2 * g, 1)]
            stated = kappa_legendre_stated(g)
            sums = kappa_g1_sum(g)
            report.record((g, 1), stated == -v, f"stated {stated} vs sw {v}")
            report.record((g, "sum"), sums == -2 * v, f"sum {sums} vs sw {v}")
    else:
        raise ArgumentError(f"no reconciliation defined for {ensemble!r}")
    if strict and not report.passed:
        raise VerificationError("route reconciliation failed", report.failures[0]["where"])
    return report


def barnes_numeric_check(ensemble: str = "gaussian", N: int = 20, g_trunc: int = 5,
                         digits: int = 60) -> CheckReport:
    """Exact finite-N log partition function vs the truncated genus expansion.

    Passes when the difference is below twice the first omitted genus term.
    """
    import mpmath

    from .exact import factorial as fact
    from .oracle import norms_and_partition

    if N < 10 or g_trunc < 2:
        raise ArgumentError("barnes_numeric_check needs N >= 10 and g_trunc >= 2")
    with mpmath.workdps(digits):
        zp = mpmath.zeta(-1, derivative=1)
        z = mpmath.mpf(N)
        if ensemble == "gaussian":
            g_value = 1
            for k in range(N):
                g_value *= fact(k)
            exact = mpmath.log(g_value)
            approx = (z ** 2 * (mpmath.log(z) / 2 - mpmath.mpf(3) / 4)
                      + mpmath.log(2 * mpmath.pi) * z / 2 - mpmath.log(z) / 12 + zp)
            terms = barnes_genus_terms(g_trunc + 1)
        elif ensemble == "legendre":
            _, Z = norms_and_partition("legendre", N)
            exact = mpmath.log(Z.numerator) - mpmath.log(Z.denominator)
            approx = (z * mpmath.log(2 * mpmath.pi) + 3 * zp + mpmath.log(2) / 12 - mpmath.log(z) / 4)
            terms = legendre_genus_terms(g_trunc + 1)
        else:
            raise ArgumentError(f"no Barnes expansion for {ensemble!r}")

        def genus_value(F):
            ((m, c),) = F.powers.items()
            return mpmath.mpf(c.numerator) / c.denominator * z ** m

        for F in terms[2:g_trunc + 1]:
            approx += genus_value(F)
        bound = 2 * abs(genus_value(terms[g_trunc + 1]))
        diff = abs(exact - approx)
        resolution = abs(exact) * mpmath.mpf(10) ** (-digits + 2)
        if resolution >= bound / 100:
            raise PrecisionError(f"{digits} digits cannot resolve bound {mpmath.nstr(bound, 5)}")
        report = CheckReport(f"barnes_numeric[{ensemble}]")
        report.record((N, g_trunc), diff < bound,
                      f"|diff| {mpmath.nstr(diff, 8)} vs bound {mpmath.nstr(bound, 8)}")
        report.meta.update(digits=digits, difference=float(diff), bound=float(bound),
                           log_exact=float(exact))
    return report
