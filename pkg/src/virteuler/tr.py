"""Topological recursion on genus-zero curves ``x = z + 1/z``.

Stable correlators are meromorphic in every variable with poles only at the two
branch points ``z = +1, -1``, and they vanish like ``dz/z^2`` at infinity, so a
correlator is exactly the sum of its principal parts.  That is the working
representation here: :class:`PrincipalPartDifferential` maps a tuple of
``(branch point, pole order)`` pairs, one per variable, to the coefficient of
``prod_i (z_i - b_i)^{-k_i} dz_i``.

Each recursion step expands the kernel and the bracket in ``t = z - alpha`` at a
branch point ``alpha``.  The kernel numerator ``int_{1/z}^{z} B(., z0)`` expands
as ``sum_j (z0 - alpha)^{-j-1} [t^j - (1/z - alpha)^j]``, so the residue in ``t``
lands directly in principal-part form in ``z0``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Tuple

from .errors import ArgumentError, DomainError, ExpansionDepthError, ResidueError, VerificationError
from .series import Polynomial, TruncatedSeries

__all__ = [
    "BRANCH_POINTS",
    "SpectralCurve",
    "PrincipalPartDifferential",
    "curve_preset",
    "tr_correlator",
    "local_expansion",
    "x_expansion",
    "sw_t0_integral",
    "calibrate_orientation",
    "sw_chain_check",
    "tr_property_checks",
    "MAX_DEPTH",
]

BRANCH_POINTS = (1, -1)
MAX_DEPTH = 512
DEFAULT_COMPLEXITY_CAP = 5

Key = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class SpectralCurve:
    """``x = z + 1/z`` with ``y = sign * scale * numerator(z) / denominator(z)``.

    The involution is ``z -> 1/z``; ``z = inf`` is the physical infinity and
    ``z = 0`` its copy on the other sheet.
    """

    name: str
    numerator: Tuple[Fraction, ...]
    denominator: Tuple[Fraction, ...]
    sign: int = 1
    scale: Fraction = Fraction(1)

    @property
    def y_num(self) -> Polynomial:
        return Polynomial(self.numerator) * (self.sign * self.scale)

    @property
    def y_den(self) -> Polynomial:
        return Polynomial(self.denominator)

    @property
    def regularity(self) -> str:
        den = self.y_den
        return "irregular" if any(den(b) == 0 for b in BRANCH_POINTS) else "regular"

    def y(self, z) -> Fraction:
        return self.y_num(z) / self.y_den(z)

    @staticmethod
    def x(z) -> Fraction:
        return z + 1 / Fraction(z)

    def with_sign(self, sign: int) -> "SpectralCurve":
        return SpectralCurve(self.name, self.numerator, self.denominator, sign, self.scale)

    def with_scale(self, scale) -> "SpectralCurve":
        return SpectralCurve(self.name, self.numerator, self.denominator, self.sign, Fraction(scale))


_PRESETS = {
    # -y dx = dz/z, the z-form of dx/sqrt(x^2-4)
    "legendre": ((0, -1), (-1, 0, 1)),
    # -y dx = (1 - z^-2) dz / z, the z-form of (x - sqrt(x^2-4))/2 dx
    "gue": ((-1,), (0, 1)),
}


def curve_preset(name: str, sign: int = 1) -> SpectralCurve:
    try:
        num, den = _PRESETS[name]
    except KeyError:
        raise ArgumentError(f"unknown curve preset {name!r}; choose from {sorted(_PRESETS)}") from None
    if sign not in (1, -1):
        raise ArgumentError("sign must be +1 or -1")
    return SpectralCurve(name, tuple(map(Fraction, num)), tuple(map(Fraction, den)), sign)


@dataclass
class PrincipalPartDifferential:
    """Exact polar parts of ``W_n^{(g)}`` at the branch points."""

    g: int
    n: int
    terms: Dict[Key, Fraction] = field(default_factory=dict)

    def coefficient(self, *key) -> Fraction:
        return self.terms.get(tuple(key), Fraction(0))

    def max_pole_order(self) -> int:
        return max((k for key in self.terms for _, k in key), default=0)

    def residue_terms(self) -> Dict[Key, Fraction]:
        return {key: c for key, c in self.terms.items() if any(k == 1 for _, k in key)}

    def permuted(self, perm) -> "PrincipalPartDifferential":
        """Relabel variables: slot ``i`` of the result is slot ``perm[i]`` of ``self``."""
        return PrincipalPartDifferential(
            self.g, self.n, {tuple(key[p] for p in perm): c for key, c in self.terms.items()})

    def scaled(self, c) -> "PrincipalPartDifferential":
        return PrincipalPartDifferential(self.g, self.n, {k: v * c for k, v in self.terms.items()})

    def evaluate(self, *zs) -> Fraction:
        """Coefficient function of ``dz_1 ... dz_n`` at rational points."""
        total = Fraction(0)
        for key, c in self.terms.items():
            term = c
            for (b, k), z in zip(key, zs):
                term /= (Fraction(z) - b) ** k
            total += term
        return total

    def __eq__(self, other):
        if not isinstance(other, PrincipalPartDifferential):
            return NotImplemented
        return (self.g, self.n, self.terms) == (other.g, other.n, other.terms)


class _Local:
    """Series data at one branch point for a fixed truncation depth."""

    def __init__(self, curve: SpectralCurve, alpha: int, depth: int):
        self.alpha = alpha
        self.depth = depth
        z = TruncatedSeries({0: alpha, 1: 1}, None, "t")
        self.t = TruncatedSeries({1: 1}, None, "t")
        self.w = z.inverse(order=depth)                      # 1/z
        self.w_shift = self.w - alpha                         # 1/z - alpha, valuation 1
        self.dzhat = -(self.w * self.w)                       # d(1/z)/dz
        num, den = curve.y_num, curve.y_den
        y = num(z) * den(z).inverse(order=depth)
        yhat = num(self.w) * den(self.w).inverse()
        dx = 1 - self.w * self.w
        self.denominator = (y - yhat) * dx
        self.inv_den = self.denominator.inverse()
        self._pole_z: dict = {}
        self._pole_zhat: dict = {}
        self._w_pow = [TruncatedSeries({0: 1}, None, "t")]
        self._kernel: dict = {}

    def pole_z(self, b: int, k: int) -> TruncatedSeries:
        """``(z - b)^{-k}`` as a series in ``t``."""
        key = (b, k)
        if key not in self._pole_z:
            if b == self.alpha:
                s = TruncatedSeries({-k: 1}, None, "t")
            else:
                s = TruncatedSeries({0: self.alpha - b, 1: 1}, None, "t").inverse(order=self.depth) ** k
            self._pole_z[key] = s
        return self._pole_z[key]

    def pole_zhat(self, b: int, k: int) -> TruncatedSeries:
        """``(1/z - b)^{-k} d(1/z)/dz``."""
        key = (b, k)
        if key not in self._pole_zhat:
            self._pole_zhat[key] = ((self.w - b).inverse() ** k) * self.dzhat
        return self._pole_zhat[key]

    def w_shift_pow(self, m: int) -> TruncatedSeries:
        while len(self._w_pow) <= m:
            self._w_pow.append(self._w_pow[-1] * self.w_shift)
        return self._w_pow[m]

    def kernel(self, j: int) -> TruncatedSeries:
        """Coefficient of ``(z0 - alpha)^{-j-1} dz0 / dz`` in the recursion kernel."""
        if j not in self._kernel:
            numer = TruncatedSeries({j: 1}, None, "t") - self.w_shift_pow(j)
            self._kernel[j] = (numer * self.inv_den).scale(Fraction(1, 2))
        return self._kernel[j]

    @property
    def kernel_valuation_bound(self) -> int:
        return 1 - self.denominator.valuation


_cache: Dict[tuple, PrincipalPartDifferential] = {}
_cache_lock = threading.Lock()


def _curve_key(curve: SpectralCurve) -> tuple:
    return (curve.numerator, curve.denominator, curve.sign, curve.scale)


def _add(acc: Dict, key, series: TruncatedSeries):
    if key in acc:
        acc[key] = acc[key] + series
    else:
        acc[key] = series


def _factor(curve, loc: _Local, h: int, vars_: tuple, at_hat: bool, partner_val: int,
            cap: int) -> Dict[tuple, TruncatedSeries]:
    """Series of ``W_{1+len(vars_)}^{(h)}(z or 1/z, z_vars)`` keyed by ``((var, b, k), ...)``."""
    out: Dict[tuple, TruncatedSeries] = {}
    if h == 0 and len(vars_) == 1:
        (v,) = vars_
        # W_2^(0)(z, z_v) = dz dz_v / (z - z_v)^2 = sum_m (m+1) t^m (z_v - alpha)^{-m-2}
        terms = max(1, -partner_val - loc.kernel_valuation_bound + 1)
        for m in range(terms):
            if at_hat:
                s = (loc.w_shift_pow(m) * loc.dzhat).scale(m + 1)
            else:
                s = TruncatedSeries({m: m + 1}, None, "t")
            out[((v, loc.alpha, m + 2),)] = s
        return out
    w = tr_correlator(curve, h, 1 + len(vars_), cap=cap)
    pole = loc.pole_zhat if at_hat else loc.pole_z
    for key, c in w.terms.items():
        (b0, k0), rest = key[0], key[1:]
        _add(out, tuple((v, b, k) for v, (b, k) in zip(vars_, rest)), pole(b0, k0).scale(c))
    return out


def _min_val(d: Dict) -> int:
    vals = [s.valuation for s in d.values() if s.coeffs]
    return min(vals) if vals else 0


def _bracket(curve, loc: _Local, g: int, n: int, cap: int) -> Dict[tuple, TruncatedSeries]:
    others = tuple(range(1, n))
    bracket: Dict[tuple, TruncatedSeries] = {}
    if g >= 1:
        if (g - 1, n + 1) == (0, 2):
            # B(z, 1/z) = dz d(1/z) / (z - 1/z)^2
            diff = TruncatedSeries({0: loc.alpha, 1: 1}, None, "t") - loc.w
            _add(bracket, (), (diff * diff).inverse() * loc.dzhat)
        else:
            w = tr_correlator(curve, g - 1, n + 1, cap=cap)
            for key, c in w.terms.items():
                (b0, k0), (b1, k1), rest = key[0], key[1], key[2:]
                s = (loc.pole_z(b0, k0) * loc.pole_zhat(b1, k1)).scale(c)
                _add(bracket, tuple(rest), s)
    for g1 in range(g + 1):
        g2 = g - g1
        for size in range(len(others) + 1):
            for subset in combinations(others, size):
                comp = tuple(v for v in others if v not in subset)
                if (g1, len(subset)) == (0, 0) or (g2, len(comp)) == (0, 0):
                    continue
                left_is_b = (g1, len(subset)) == (0, 1)
                right_is_b = (g2, len(comp)) == (0, 1)
                left = right = None
                if not left_is_b:
                    left = _factor(curve, loc, g1, subset, False, 0, cap)
                if not right_is_b:
                    right = _factor(curve, loc, g2, comp, True, 0, cap)
                if left_is_b:
                    left = _factor(curve, loc, g1, subset, False, _min_val(right) if right else 0, cap)
                if right_is_b:
                    right = _factor(curve, loc, g2, comp, True, 0 if left_is_b else _min_val(left), cap)
                for kl, sl in left.items():
                    for kr, sr in right.items():
                        key = tuple(sorted(kl + kr))
                        _add(bracket, tuple((b, k) for _, b, k in key), sl * sr)
    return bracket


def _recurse(curve: SpectralCurve, g: int, n: int, depth: int, cap: int) -> PrincipalPartDifferential:
    terms: Dict[Key, Fraction] = {}
    for alpha in BRANCH_POINTS:
        loc = _Local(curve, alpha, depth)
        bracket = _bracket(curve, loc, g, n, cap)
        vb = _min_val(bracket)
        j = 1
        while j - loc.denominator.valuation + vb <= -1:
            kern = loc.kernel(j)
            for key, s in bracket.items():
                prod = kern * s
                if prod.order is not None and prod.order <= -1:
                    raise ExpansionDepthError(
                        f"depth {depth} insufficient for W_{n}^({g}) at z={alpha}")
                r = prod.coeffs.get(-1)
                if r:
                    full = ((alpha, j + 1),) + key
                    terms[full] = terms.get(full, 0) + r
            j += 1
    return PrincipalPartDifferential(g, n, {k: v for k, v in terms.items() if v})


def tr_correlator(curve: SpectralCurve, g: int, n: int, cap: int = DEFAULT_COMPLEXITY_CAP,
                  depth: int | None = None) -> PrincipalPartDifferential:
    """``W_n^{(g)}`` for a stable pair as exact principal parts at ``z = +-1``.

    Results are cached per curve; the local expansion depth doubles on
    :class:`ExpansionDepthError` up to :data:`MAX_DEPTH`.
    """
    if g < 0 or n < 1 or 2 * g - 2 + n <= 0:
        raise DomainError(f"W_{n}^({g}) is not a stable correlator", (g, n))
    if 2 * g - 2 + n > cap:
        raise DomainError(f"2g-2+n = {2 * g - 2 + n} exceeds complexity cap {cap}", (g, n))
    key = (_curve_key(curve), g, n)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    depth = depth or 2 * (6 * g + 2 * n) + 4
    while True:
        try:
            result = _recurse(curve, g, n, depth, cap)
            break
        except ExpansionDepthError:
            depth *= 2
            if depth > MAX_DEPTH:
                raise
    bound = 6 * g + 2 * n - 4
    if result.max_pole_order() > bound:
        raise VerificationError(f"pole order {result.max_pole_order()} exceeds bound {bound}", (g, n))
    if result.residue_terms():
        raise VerificationError("stable correlator carries residue terms", (g, n))
    with _cache_lock:
        _cache.setdefault(key, result)
    return _cache[key]


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


def local_expansion(w1: PrincipalPartDifferential, alpha: int, order: int) -> TruncatedSeries:
    """Laurent expansion of a one-point differential's coefficient at ``z = alpha``."""
    t = TruncatedSeries({0: alpha, 1: 1}, None, "t")
    out = TruncatedSeries({}, None, "t")
    for ((b, k),), c in w1.terms.items():
        if b == alpha:
            out = out + TruncatedSeries({-k: c}, None, "t")
        else:
            out = out + ((t - b).inverse(order=order) ** k).scale(c)
    return out.truncate(order)


def x_expansion(w1: PrincipalPartDifferential, k_max: int) -> list:
    """Coefficients of ``x^{-2k-1} dx``, ``k = 0..k_max``, of a one-point differential at ``z = inf``.

    Uses ``1/z = sum_n Catalan(n) u^{2n+1}`` with ``u = 1/x``.
    """
    order = 2 * k_max + 4
    s_coeffs, cat = {}, Fraction(1)
    for m in range(0, order):
        if 2 * m + 1 >= order:
            break
        s_coeffs[2 * m + 1] = cat
        cat = cat * 2 * (2 * m + 1) / (m + 2)
    s = TruncatedSeries(s_coeffs, order, "u")
    f = TruncatedSeries({}, None, "u")
    for key, c in w1.terms.items():
        ((b, k),) = key
        # (z - b)^{-k} = s^k (1 - b s)^{-k}
        f = f + ((s ** k) * ((1 - s.scale(b)).inverse() ** k)).scale(c)
    # f dz = f * s^{-2} * s'(u) * u^2 dx
    dens = f * (s * s).inverse() * s.derivative() * TruncatedSeries({2: 1}, None, "u")
    return [dens.coefficient(2 * k + 1) for k in range(k_max + 1)]


def sw_t0_integral(curve: SpectralCurve, g: int, orientation: int = 1) -> Fraction:
    """``orientation * int_{z=inf}^{z=0} W_1^{(g)}`` by termwise antiderivatives."""
    w1 = tr_correlator(curve, g, 1)
    total = Fraction(0)
    for ((b, k),), c in w1.terms.items():
        if k == 1:
            raise ResidueError(f"W_1^({g}) has residue {c} at z={b}; path integral undefined")
        # (z-b)^{1-k}/(1-k) vanishes at infinity
        total += c * Fraction(-b) ** (1 - k) / (1 - k)
    return orientation * total


def calibrate_orientation(reference: Fraction | None = None) -> int:
    """The single global sign, fixed so that the Legendre genus-one integral is ``reference``."""
    if reference is None:
        from .genfunc import kappa_sw_route, legendre_genus_terms
        reference = kappa_sw_route(legendre_genus_terms(1), 1).entries[(2, 1)]
    raw = sw_t0_integral(curve_preset("legendre"), 1)
    if raw == reference:
        return 1
    if raw == -reference:
        return -1
    raise VerificationError(f"calibration impossible: raw integral {raw} vs {reference}", ("legendre", 1))


def sw_chain_check(curve: SpectralCurve | str, g_max: int = 3, orientation: int | None = None):
    """Compare ``sw_t0_integral`` with the free-energy route for ``1 <= g <= g_max``.

    The orientation is calibrated once at Legendre genus one unless given; at the
    calibration point itself the comparison is skipped.
    """
    from .genfunc import barnes_genus_terms, kappa_sw_route, legendre_genus_terms
    from .reports import CheckReport

    if isinstance(curve, str):
        curve = curve_preset(curve)
    if curve.name == "legendre":
        expected = kappa_sw_route(legendre_genus_terms(g_max), 1)
    elif curve.name == "gue":
        expected = kappa_sw_route(barnes_genus_terms(g_max), 1)
    else:
        raise ArgumentError(f"no free-energy reference for curve {curve.name!r}")
    calibrated = orientation is None
    if calibrated:
        orientation = calibrate_orientation()
    report = CheckReport(f"sw_chain[{curve.name}]")
    for g in range(1, g_max + 1):
        got = sw_t0_integral(curve, g, orientation)
        want = expected.entries[(2 * g, 1)]
        if curve.name == "legendre" and g == 1 and calibrated:
            report.record((g,), got == want, f"calibration point {got}")
            continue
        report.record((g,), got == want, f"tr {got} vs sw-route {want}")
    report.meta["orientation"] = orientation
    return report


def tr_property_checks(curve: SpectralCurve | str, g_max: int = 2, k_max: int = 6):
    """Structural invariants of the computed correlators.

    Residue-freeness and the pole-order bound for ``W_1^{(g)}``, ``W_3^{(0)}`` and
    ``W_2^{(1)}``; permutation symmetry of the multi-point ones; the sign map
    ``c(-b, k) = prod (-1)^{k_i+1} c(b, k)`` induced by ``z -> -z`` (both presets
    have odd ``y``); the scaling ``W_n^{(g)} -> 2^{2-2g-n} W_n^{(g)}`` under
    ``y -> 2y`` for ``g = 1, 2``; and, for Legendre, agreement of the expansion
    of ``W_1^{(g)}`` at ``x = inf`` with ``-eps_g`` from the ODE.
    """
    from itertools import permutations

    from .reports import CheckReport

    if isinstance(curve, str):
        curve = curve_preset(curve)
    report = CheckReport(f"tr_properties[{curve.name}]")
    pairs = [(g, 1) for g in range(1, g_max + 1)] + [(0, 3), (1, 2)]
    for g, n in pairs:
        w = tr_correlator(curve, g, n)
        report.record(("residue", g, n), not w.residue_terms(), "no simple-pole terms")
        bound = 6 * g + 2 * n - 4
        report.record(("pole_bound", g, n), w.max_pole_order() <= bound,
                      f"max order {w.max_pole_order()} vs {bound}")
        for perm in permutations(range(n)):
            report.record(("symmetry", g, n, perm), w.permuted(perm) == w, "permutation invariant")
        for key, c in w.terms.items():
            mirrored = tuple((-b, k) for b, k in key)
            sign = 1
            for _, k in key:
                sign *= (-1) ** (k + 1)
            report.record(("parity", g, n, key), w.coefficient(*mirrored) == sign * c,
                          f"{w.coefficient(*mirrored)} vs {sign * c}")
    doubled = curve.with_scale(2 * curve.scale)
    for g in range(1, min(g_max, 2) + 1):
        w, w2 = tr_correlator(curve, g, 1), tr_correlator(doubled, g, 1)
        report.record(("scaling", g), w2 == w.scaled(Fraction(2) ** (1 - 2 * g)), "y -> 2y")
    if curve.name == "legendre" and curve.sign == 1 and curve.scale == 1:
        from .onept import ode_series_solve

        ode = ode_series_solve(g_max, k_max)
        for g in range(1, g_max + 1):
            got = x_expansion(tr_correlator(curve, g, 1), k_max)
            want = [-v for v in ode.row(g)]
            report.record(("x_expansion", g), got == want, f"{got[:3]} vs {want[:3]}")
    return report
