"""Exact virtual Euler characteristics from matrix-model free energies.

The package computes ``kappa_{g,s}`` along several independent routes (Barnes-G
free energies, closed forms, the Legendre one-point recursions, topological
recursion on ``x = z + 1/z``) in exact rational arithmetic, and cross-checks
them against finite-N orthogonal-polynomial ground truth.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    ArgumentError,
    DomainError,
    ExpansionDepthError,
    ExtractionError,
    PrecisionError,
    ResidueError,
    ResourceError,
    SequencingError,
    VerificationError,
    VirtEulerError,
)
from .exact import Rational, as_rational, bernoulli
from .genfunc import (
    FreeEnergy,
    KappaTable,
    barnes_genus_terms,
    kappa_closed_gaussian,
    kappa_goe_nonorientable,
    kappa_legendre_stated,
    kappa_sw_route,
    legendre_genus_terms,
)
from .onept import EpsilonTable, UCoeffTable, f_table, kappa_g1_sum, kappa_n_table, ode_series_solve, r_table
from .oracle import EnsembleSpec, genus_extract, moments_exact, norms_and_partition
from .reports import CheckReport
from .series import Polynomial, TruncatedSeries
from .tr import PrincipalPartDifferential, SpectralCurve, curve_preset, sw_t0_integral, tr_correlator

__all__ = [name for name in dir() if not name.startswith("_")]
