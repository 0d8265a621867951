"""Finite sections of weighted composition operators and their checks.

The operator f -> psi * (f o phi) acting on a weighted Hardy space has, in
the normalized monomial basis e_j = z^j / beta(j), the matrix

    M[i, j] = (beta(i) / beta(j)) * [z^i](psi * phi^j).

Coefficient i of psi * phi^j depends only on coefficients 0..i of psi and
phi, so every entry of the (N+1) x (N+1) section equals the corresponding
entry of the infinite matrix: Hermitian-ness certified here is exact, not
an artifact of truncation.  Operator norms, in contrast, are only reached
from below by finite sections; the one quantitative upper bound available
is the Gaussian-family estimate in `fock_bound`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .series import TruncatedSeries, compose_poly
from .spaces import (
    Binomial,
    DomainError,
    Exponential,
    WeightSequence,
    family_weights,
    kernel,
)
from .symbols import SymbolPair, dilate

__all__ = [
    "OperatorMatrix",
    "build_matrix",
    "hermitian_deviation",
    "hermitian_deviation_argmax",
    "MomentResiduals",
    "moment_conditions",
    "apply",
    "adjoint_on_kernel",
    "kernel_identity_residual",
    "kernel_tail_bound",
    "conjugation_check",
    "fock_bound",
    "finite_section_norm",
    "matrix_to_json",
    "matrix_to_csv",
    "deviation_report",
]


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Finite section in the normalized basis, with its weight sequence."""

    entries: np.ndarray
    beta: WeightSequence
    exact: bool = True

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError("entries must form a square matrix")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def order(self) -> int:
        return self.entries.shape[0] - 1


def build_matrix(
    sp: SymbolPair, ws: WeightSequence, order: int | None = None
) -> OperatorMatrix:
    """Assemble the section column by column: column j is psi * phi^j."""
    n = sp.order if order is None else order
    if ws.order < n or sp.order < n:
        raise ValueError(
            f"need symbols and weights at order >= {n} "
            f"(got symbols {sp.order}, weights {ws.order})"
        )
    psi = sp.psi.truncated(n)
    phi = sp.phi.truncated(n)
    beta = ws.beta[: n + 1]
    entries = np.empty((n + 1, n + 1), dtype=complex)
    power = np.zeros(n + 1, dtype=complex)
    power[0] = 1.0
    for j in range(n + 1):
        column = np.convolve(psi.coeffs, power)[: n + 1]
        entries[:, j] = column * beta / beta[j]
        if j < n:
            power = np.convolve(power, phi.coeffs)[: n + 1]
    return OperatorMatrix(entries=entries, beta=WeightSequence(beta, ws.provenance))


def hermitian_deviation(m: OperatorMatrix) -> float:
    """max |M - M*| over all entries; zero iff the section is Hermitian."""
    return float(np.max(np.abs(m.entries - m.entries.conj().T)))


def hermitian_deviation_argmax(m: OperatorMatrix) -> tuple[float, tuple[int, int]]:
    diff = np.abs(m.entries - m.entries.conj().T)
    flat = int(np.argmax(diff))
    i, j = divmod(flat, diff.shape[1])
    return float(diff[i, j]), (i, j)


@dataclass(frozen=True)
class MomentResiduals:
    m0: float
    m1: float
    m2: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.m0, self.m1, self.m2)


def moment_conditions(m: OperatorMatrix) -> MomentResiduals:
    """Self-adjointness restricted to the first three basis vectors.

    m_j = max_i |M[i,j] - conj(M[j,i])|.  The first two vanish for any
    weight sequence once the symbols have the required closed-form shape;
    the third is the discriminating condition that forces the generating
    function's differential equation.
    """
    residuals = [
        float(np.max(np.abs(m.entries[:, j] - np.conj(m.entries[j, :]))))
        for j in range(3)
    ]
    return MomentResiduals(*residuals)


def apply(sp: SymbolPair, f: TruncatedSeries) -> TruncatedSeries:
    """psi * (f o phi) for polynomial f, truncated at the common order."""
    return sp.psi * compose_poly(f, sp.phi)


def adjoint_on_kernel(
    sp: SymbolPair, w: complex, ws: WeightSequence, order: int | None = None
) -> TruncatedSeries:
    """The adjoint applied to a kernel: conj(psi(w)) * K_{phi(w)}.

    Requires phi(w) to stay inside the unit disk.
    """
    w = complex(w)
    n = sp.order if order is None else order
    phi_w = sp.phi(w)
    if abs(phi_w) >= 1.0:
        raise DomainError(f"phi(w) = {phi_w} lies outside the open unit disk")
    return complex(np.conj(sp.psi(w))) * kernel(phi_w, ws, n)


def kernel_identity_residual(
    sp: SymbolPair, ws: WeightSequence, w: complex, order: int | None = None
) -> float:
    """H^2(beta)-norm of (W - W*) applied to the truncated kernel at w.

    Zero (up to truncation and roundoff) exactly when the operator is
    Hermitian; `kernel_tail_bound` quantifies what truncating K_w dropped.
    """
    w = complex(w)
    if abs(w) > 0.8:
        raise DomainError(
            "kernel points are restricted to |w| <= 0.8 to keep the truncation tail controlled"
        )
    n = sp.order if order is None else order
    k_w = kernel(w, ws, n)
    forward = sp.psi.truncated(n) * compose_poly(k_w, sp.phi.truncated(n))
    backward = adjoint_on_kernel(sp, w, ws, n)
    diff = forward - backward
    beta = ws.beta[: n + 1]
    return float(np.sqrt(np.sum(np.abs(diff.coeffs) ** 2 * beta**2)))


def kernel_tail_bound(cls, w: complex, order: int, max_terms: int = 100_000) -> float:
    """Sum_{j > N} |w|^(2j) / beta(j)^2 for a family space: the squared-norm
    mass of the kernel tail dropped by truncation."""
    w_sq = abs(complex(w)) ** 2
    if isinstance(cls, Exponential):
        def coeff_ratio(j):
            return 1.0 / (cls.b_sq * (j + 1))
    elif isinstance(cls, Binomial):
        def coeff_ratio(j):
            return cls.lam * (cls.eta + j) / (j + 1)
    else:
        raise ValueError("tail bounds are available for family spaces only")
    # term_j = |w|^(2j) * khat(j); advance the recurrence past the truncation
    term = 1.0
    for j in range(order + 1):
        term *= w_sq * coeff_ratio(j)
        if term == 0.0:
            return 0.0
    total = 0.0
    for j in range(order + 1, order + 1 + max_terms):
        total += term
        ratio = w_sq * coeff_ratio(j)
        term *= ratio
        if term < 1e-30 * max(total, 1.0):
            break
    return total


def conjugation_check(sp: SymbolPair, order: int | None = None) -> float:
    """Entrywise residual of the dilation conjugation identity.

    The pair over the lam < 1 space and its dilated lam = 1 counterpart are
    intertwined by the (unitary) dilation z -> sqrt(lam) z, whose matrix in
    the two normalized bases is the identity; the two sections must agree
    entry by entry.
    """
    cls = sp.cls
    if not isinstance(cls, Binomial):
        raise ValueError("the conjugation identity applies to binomial pairs")
    n = sp.order if order is None else order
    ws_lam = family_weights(cls, n)
    m_lam = build_matrix(sp, ws_lam, n)
    tilted = dilate(sp, n)
    ws_one = family_weights(tilted.cls, n)
    m_one = build_matrix(tilted, ws_one, n)
    return float(np.max(np.abs(m_lam.entries - m_one.entries)))


def fock_bound(sp: SymbolPair) -> float:
    """Analytic upper bound for the squared operator norm on the Gaussian
    space: (c^2/a1^2) * sup_r exp(g(r)/b^2), where after centering at a0 the
    exponent g(r) = (1 - 1/a1^2) r^2 + 2|a0|(1 + 1/|a1|) r + |a0|^2 is a
    downward parabola in r = |z - a0| (its vertex gives the supremum).
    """
    if not isinstance(sp.cls, Exponential):
        raise ValueError("the Gaussian norm bound applies to exponential-family pairs")
    a1 = abs(sp.a1)
    if not (0.0 < a1 < 1.0):
        raise DomainError(f"the bound requires 0 < |a1| < 1 (got {a1})")
    b_sq = sp.cls.b_sq
    m = abs(sp.a0)
    quad = 1.0 - 1.0 / (a1 * a1)
    lin = 2.0 * m * (1.0 + 1.0 / a1)
    r_star = -lin / (2.0 * quad)  # >= 0 since quad < 0
    sup_exponent = m * m + lin * r_star + quad * r_star * r_star
    return float(abs(sp.c) ** 2 / (a1 * a1) * math.exp(sup_exponent / b_sq))


def finite_section_norm(m: OperatorMatrix) -> float:
    """Largest singular value of the section: a lower bound for the operator
    norm, nondecreasing in the truncation order."""
    return float(np.linalg.svd(m.entries, compute_uv=False)[0])


# ---------------------------------------------------------------------------
# export formats


def matrix_to_json(m: OperatorMatrix) -> dict:
    return {
        "order": m.order,
        "exact": m.exact,
        "entries": [
            [[float(v.real), float(v.imag)] for v in row] for row in m.entries
        ],
    }


def matrix_to_csv(m: OperatorMatrix) -> str:
    """Row-major CSV; each cell is a quoted "re,im" pair."""
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_ALL)
    for row in m.entries:
        writer.writerow([f"{v.real:.17g},{v.imag:.17g}" for v in row])
    return buf.getvalue()


def deviation_report(m: OperatorMatrix) -> dict:
    deviation, argmax = hermitian_deviation_argmax(m)
    return {"deviation": deviation, "argmax": list(argmax), "N": m.order}
