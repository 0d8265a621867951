"""Hermitian candidate symbols and self-map parameter regions.

A Hermitian weighted composition operator on a hospitable space is pinned
down by three scalars: a0 = phi(0) (complex), a1 = phi'(0) (real), and
c = psi(0) (real).  The weight symbol is psi(z) = c k(conj(a0) z) and the
composition symbol is

    phi(z) = a0 + a1 beta(1)^2 z k'(conj(a0) z) / k(conj(a0) z),

which for the two hospitable families collapses to an affine map
(exponential case) or the rational map a0 + a1 z / (1 - lam conj(a0) z)
(binomial case).  `synthesize` materializes the family closed forms;
`synthesize_from_weights` builds the same shape over an arbitrary weight
sequence, which is what makes inhospitable spaces testable.

The self-map region of the rational phi is an exact closed interval in a1
(`selfmap_interval`); `mobius_circle_max` is the independent boundary
oracle used to confirm its sharpness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import TruncatedSeries, binomial_series, exp_series
from .spaces import (
    Binomial,
    DomainError,
    Exponential,
    NotHospitable,
    SpaceClass,
    WeightSequence,
    classify_weights,
    space_class_to_json,
)

__all__ = [
    "NONTRIVIAL",
    "ZERO_WEIGHT",
    "FIXED_ORIGIN",
    "RANK_ONE",
    "triviality",
    "SymbolPair",
    "synthesize",
    "synthesize_from_weights",
    "SelfMapInterval",
    "selfmap_interval",
    "is_selfmap",
    "check_sqrt_lambda_lift",
    "dilate",
    "mobius_circle_max",
    "a1_from_fraction",
    "symbol_pair_to_json",
]

NONTRIVIAL = "nontrivial"
ZERO_WEIGHT = "zero-weight"
FIXED_ORIGIN = "fixed-origin"
RANK_ONE = "rank-one"

#: absolute slack for closed-interval membership at the self-map boundary
ENDPOINT_SLACK = 1e-12


def triviality(a0: complex, a1: complex, c: complex) -> str:
    """The degenerate-case tag: zero weight, fixed origin, or rank one.

    c = 0 kills the operator; a0 = 0 forces psi constant and phi linear;
    a1 = 0 makes the operator rank one (evaluation at a0 times the kernel).
    """
    if c == 0:
        return ZERO_WEIGHT
    if a0 == 0:
        return FIXED_ORIGIN
    if a1 == 0:
        return RANK_ONE
    return NONTRIVIAL


@dataclass(frozen=True, eq=False)
class SymbolPair:
    """Materialized (psi, phi) for given parameters over a classified space.

    a1 and c are real for genuine Hermitian candidates; complex values are
    accepted so perturbation tests can demonstrate that realness is sharp.
    """

    a0: complex
    a1: complex
    c: complex
    cls: SpaceClass
    psi: TruncatedSeries
    phi: TruncatedSeries
    trivial: str

    @property
    def order(self) -> int:
        return self.psi.order


def synthesize(
    cls: SpaceClass, a0: complex, a1: complex, c: complex, order: int
) -> SymbolPair:
    """Build the closed-form candidate symbols for a hospitable family.

    Exponential: psi = c exp(conj(a0) z / b^2), phi = a0 + a1 z.
    Binomial:    psi = c (1 - lam conj(a0) z)^(-eta),
                 phi = a0 + a1 z / (1 - lam conj(a0) z).
    """
    a0, a1, c = complex(a0), complex(a1), complex(c)
    a0_bar = a0.conjugate()
    if isinstance(cls, NotHospitable):
        raise ValueError(
            "cannot synthesize family symbols for an inhospitable space; "
            "use synthesize_from_weights for the general shape"
        )
    if isinstance(cls, Exponential):
        psi = c * exp_series(a0_bar / cls.b_sq, order)
        phi_c = np.zeros(order + 1, dtype=complex)
        phi_c[0] = a0
        if order >= 1:
            phi_c[1] = a1
        phi = TruncatedSeries(phi_c)
    else:
        psi = c * binomial_series(cls.lam * a0_bar, cls.eta, order)
        phi_c = np.zeros(order + 1, dtype=complex)
        phi_c[0] = a0
        if order >= 1:
            ratio = cls.lam * a0_bar
            phi_c[1:] = a1 * ratio ** np.arange(order)
        phi = TruncatedSeries(phi_c)
    return SymbolPair(
        a0=a0, a1=a1, c=c, cls=cls, psi=psi, phi=phi, trivial=triviality(a0, a1, c)
    )


def synthesize_from_weights(
    ws: WeightSequence,
    a0: complex,
    a1: complex,
    c: complex,
    cls: SpaceClass | None = None,
) -> SymbolPair:
    """Build the candidate symbol shape directly from a weight sequence.

    Uses the sequence's own generating coefficients, so it works for any
    space, hospitable or not.  phi comes from the series quotient
    z k'(conj(a0) z) / k(conj(a0) z), exact through the truncation order.
    """
    a0, a1, c = complex(a0), complex(a1), complex(c)
    n = ws.order
    if cls is None:
        cls = classify_weights(ws)
    khat = ws.generating_coefficients().astype(complex)
    a0_bar = a0.conjugate()
    kappa = TruncatedSeries(khat * a0_bar ** np.arange(n + 1))  # k(conj(a0) z)
    psi = c * kappa
    if a0 == 0:
        phi_c = np.zeros(n + 1, dtype=complex)
        if n >= 1:
            phi_c[1] = a1
        phi = TruncatedSeries(phi_c)
    else:
        quotient = kappa.z_times_derivative() / kappa  # conj(a0) z k'(..)/k(..)
        beta1_sq = float(ws.beta[1] ** 2)
        phi = (a1 * beta1_sq / a0_bar) * quotient
        phi_c = phi.coeffs.copy()
        phi_c[0] = a0
        phi = TruncatedSeries(phi_c, phi.exact_to)
    return SymbolPair(
        a0=a0, a1=a1, c=c, cls=cls, psi=psi, phi=phi, trivial=triviality(a0, a1, c)
    )


# ---------------------------------------------------------------------------
# self-map regions of the rational composition symbol


@dataclass(frozen=True)
class SelfMapInterval:
    """Exact a1-interval for phi to map the disk of radius rho into itself."""

    a0_mod: float
    lam: float
    rho: float
    a1_min: float
    a1_max: float
    admissible: bool

    def contains(self, a1: float, slack: float = ENDPOINT_SLACK) -> bool:
        return self.admissible and (self.a1_min - slack <= a1 <= self.a1_max + slack)

    def at_endpoint(self, a1: float, tol: float = 1e-9) -> bool:
        return self.admissible and (
            abs(a1 - self.a1_min) <= tol or abs(a1 - self.a1_max) <= tol
        )


def _check_region_preconditions(a0: complex, lam: float, rho: float) -> float:
    if not (0.0 < lam <= 1.0):
        raise DomainError(f"lam must satisfy 0 < lam <= 1 (got {lam})")
    if rho <= 0.0:
        raise DomainError(f"rho must be positive (got {rho})")
    if rho > 1.0 / math.sqrt(lam) + ENDPOINT_SLACK:
        raise DomainError(
            f"rho must satisfy rho <= 1/sqrt(lam) (got rho={rho}, 1/sqrt(lam)={1/math.sqrt(lam)})"
        )
    m = abs(complex(a0))
    if rho * m * lam >= 1.0:
        raise DomainError(
            f"rho*|a0|*lam must be < 1 (got {rho * m * lam}); phi is not analytic "
            "on the closed disk otherwise"
        )
    return m


def selfmap_interval(a0: complex, lam: float, rho: float = 1.0) -> SelfMapInterval:
    """Closed interval of real a1 for which a0 + a1 z/(1 - conj(a0) lam z)
    maps the disk of radius rho into itself.

    Endpoints: a1_min = (1 + |a0| lam rho)(|a0| - rho)/rho and
    a1_max = (rho - |a0|)(1 - |a0| lam rho)/rho.  At a0 = 0 these reduce to
    [-1, 1], the plain linear-map condition |a1| <= 1.  No interval exists
    unless |a0| < rho.
    """
    m = _check_region_preconditions(a0, lam, rho)
    admissible = m < rho
    a1_min = (1.0 + m * lam * rho) * (m - rho) / rho
    a1_max = (rho - m) * (1.0 - m * lam * rho) / rho
    return SelfMapInterval(
        a0_mod=m, lam=lam, rho=rho, a1_min=a1_min, a1_max=a1_max, admissible=admissible
    )


def is_selfmap(a0: complex, a1: float, lam: float, rho: float = 1.0) -> bool:
    """Membership of a1 in the exact self-map interval (closed endpoints)."""
    interval = selfmap_interval(a0, lam, rho)
    return interval.contains(float(a1))


def check_sqrt_lambda_lift(a0: complex, a1: float, lam: float) -> bool:
    """A unit-disk self-map of this shape must also map the larger disk of
    radius 1/sqrt(lam) into itself; this recomputes the claim numerically
    rather than assuming it."""
    if not is_selfmap(a0, a1, lam, rho=1.0):
        raise DomainError("the pair is not a self-map of the unit disk")
    return is_selfmap(a0, a1, lam, rho=1.0 / math.sqrt(lam))


def a1_from_fraction(interval: SelfMapInterval, fraction: float) -> float:
    """Map a signed fraction in [-1, 1] onto the self-map interval.

    Positive fractions scale a1_max, negative ones scale a1_min, so every
    grid point is admissible by construction and +/-1 hit the endpoints.
    """
    if not interval.admissible:
        raise DomainError("the interval is empty (|a0| >= rho)")
    if not -1.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must lie in [-1, 1] (got {fraction})")
    return fraction * interval.a1_max if fraction >= 0 else -fraction * interval.a1_min


def mobius_circle_max(
    a0: complex, a1: float, lam: float, rho: float = 1.0, n_grid: int = 4096
) -> float:
    """Maximum of |phi| over the circle |z| = rho, by direct evaluation.

    The grid is augmented with the two analytically-extremal directions
    (along +/- a0), where the maximum is attained; this keeps the oracle
    sharp at interval endpoints without a fine grid.
    """
    m = _check_region_preconditions(a0, lam, rho)
    t = 2.0 * np.pi * np.arange(n_grid) / n_grid
    z = rho * np.exp(1j * t)
    if m > 0:
        direction = complex(a0) / m
        z = np.concatenate([z, [rho * direction, -rho * direction]])
    vals = complex(a0) + a1 * z / (1.0 - np.conj(complex(a0)) * lam * z)
    return float(np.max(np.abs(vals)))


# ---------------------------------------------------------------------------
# dilation to the lam = 1 normal form


def dilate(sp: SymbolPair, order: int | None = None) -> SymbolPair:
    """Conjugate a binomial pair to its lam = 1 normal form.

    Replaces a0 by sqrt(lam) a0 (same a1, same c) over the space with
    generating function (1 - z)^(-eta).  Composing with the dilation
    z -> sqrt(lam) z is a surjective isometry between the two spaces, so
    the two operators are unitarily equivalent; `conjugation_check`
    verifies the resulting matrix identity.
    """
    cls = sp.cls
    if not isinstance(cls, Binomial):
        raise ValueError("dilation applies to binomial-family pairs only")
    n = sp.order if order is None else order
    target = Binomial(lam=1.0, eta=cls.eta, gamma=(cls.eta + 1.0) / cls.eta)
    return synthesize(target, math.sqrt(cls.lam) * sp.a0, sp.a1, sp.c, n)


# ---------------------------------------------------------------------------
# JSON wire format


def symbol_pair_to_json(sp: SymbolPair) -> dict:
    return {
        "a0": [sp.a0.real, sp.a0.imag],
        "a1": sp.a1.real if sp.a1.imag == 0 else [sp.a1.real, sp.a1.imag],
        "c": sp.c.real if sp.c.imag == 0 else [sp.c.real, sp.c.imag],
        "class": space_class_to_json(sp.cls),
        "trivial": sp.trivial,
    }
