"""Truncated power-series arithmetic over complex coefficients.

A :class:`TruncatedSeries` of order ``N`` stores the Maclaurin coefficients
``0..N`` of an analytic function.  Multiplication and integer powers are
*exact through order N*: coefficient ``j`` of a product depends only on
coefficients ``0..j`` of the factors, so the stored entries equal the true
product coefficients whenever the inputs are exact.  Differentiation loses
the last order; the ``exact_to`` field tracks how far the entries can be
trusted, and consumers that need second derivatives exact at order ``N``
should construct their inputs at order ``N + 2``.

All values are immutable; every operation returns a fresh series.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "OrderMismatchError",
    "TruncatedSeries",
    "polynomial",
    "zero",
    "one",
    "monomial",
    "compose_poly",
    "exp_series",
    "binomial_series",
    "series_to_json",
    "series_from_json",
]


class OrderMismatchError(ValueError):
    """Operands of series arithmetic have different truncation orders."""


def _as_coeffs(values) -> np.ndarray:
    c = np.array(values, dtype=complex)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficients must be a nonempty one-dimensional sequence")
    c.setflags(write=False)
    return c


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Degree-N complex polynomial standing for Maclaurin coefficients 0..N.

    ``exact_to`` is the largest index whose entry is guaranteed exact
    (entries past it may be zeroed truncation artifacts, e.g. after
    :meth:`derivative`).
    """

    coeffs: np.ndarray
    exact_to: int = -1

    def __post_init__(self):
        c = _as_coeffs(self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if self.exact_to < 0:
            object.__setattr__(self, "exact_to", c.size - 1)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def _require_same_order(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise OrderMismatchError(
                f"series orders differ: {self.order} vs {other.order}"
            )

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            self._require_same_order(other)
            return TruncatedSeries(
                self.coeffs + other.coeffs, min(self.exact_to, other.exact_to)
            )
        c = self.coeffs.copy()
        c[0] += other
        return TruncatedSeries(c, self.exact_to)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs, self.exact_to)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncatedSeries) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.coeffs * complex(other), self.exact_to)
        self._require_same_order(other)
        a, b = self.coeffs, other.coeffs
        # Canonical operand order makes f*g and g*f bitwise identical
        # (np.convolve is not symmetric in its rounding).
        if a.tobytes() > b.tobytes():
            a, b = b, a
        prod = np.convolve(a, b)[: self.order + 1]
        return TruncatedSeries(prod, min(self.exact_to, other.exact_to))

    __rmul__ = __mul__

    def __pow__(self, j: int):
        """Integer power by repeated multiplication; ``f ** 0`` is 1."""
        if not isinstance(j, (int, np.integer)) or j < 0:
            raise ValueError("series powers must use non-negative integer exponents")
        out = one(self.order)
        for _ in range(int(j)):
            out = out * self
        return out

    def __truediv__(self, other):
        """Series division; the divisor must have a nonzero constant term."""
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.coeffs / complex(other), self.exact_to)
        self._require_same_order(other)
        if other.coeffs[0] == 0:
            raise ZeroDivisionError("series division requires a nonzero constant term")
        n = self.order + 1
        num, den = self.coeffs, other.coeffs
        q = np.zeros(n, dtype=complex)
        q[0] = num[0] / den[0]
        for i in range(1, n):
            q[i] = (num[i] - np.dot(den[1 : i + 1], q[i - 1 :: -1])) / den[0]
        return TruncatedSeries(q, min(self.exact_to, other.exact_to))

    # -- calculus -----------------------------------------------------------

    def derivative(self) -> "TruncatedSeries":
        """Termwise derivative; the last entry is zero and marked inexact."""
        n = self.order
        d = np.zeros(n + 1, dtype=complex)
        d[:n] = self.coeffs[1:] * np.arange(1, n + 1)
        return TruncatedSeries(d, min(self.exact_to - 1, n - 1))

    def z_times_derivative(self) -> "TruncatedSeries":
        """The series z*f'(z), with coefficients j*f(j); exact wherever f is."""
        return TruncatedSeries(
            self.coeffs * np.arange(self.order + 1), self.exact_to
        )

    def __call__(self, z):
        """Horner evaluation of the truncation at scalar or array ``z``.

        The result approximates the underlying function only within its
        radius of convergence; the error is the dropped tail.
        """
        z = np.asarray(z, dtype=complex)
        vals = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            vals = vals * z + c
        return complex(vals) if vals.ndim == 0 else vals

    def truncated(self, order: int) -> "TruncatedSeries":
        """Drop (or zero-pad) to the requested order."""
        if order < self.order:
            return TruncatedSeries(
                self.coeffs[: order + 1], min(self.exact_to, order)
            )
        c = np.zeros(order + 1, dtype=complex)
        c[: self.order + 1] = self.coeffs
        # padded zeros are placeholders, not known coefficients
        return TruncatedSeries(c, self.exact_to)

    def __repr__(self):
        head = np.array2string(self.coeffs[:4], precision=6, separator=", ")
        return f"TruncatedSeries(order={self.order}, coeffs={head}...)"


# -- constructors -----------------------------------------------------------


def polynomial(coeffs: Sequence[complex], order: int | None = None) -> TruncatedSeries:
    """Series from low-to-high coefficients, zero-padded to ``order``."""
    c = np.asarray(coeffs, dtype=complex)
    n = c.size - 1 if order is None else order
    if c.size - 1 > n:
        raise ValueError(f"{c.size - 1} coefficients exceed requested order {n}")
    out = np.zeros(n + 1, dtype=complex)
    out[: c.size] = c
    return TruncatedSeries(out)


def zero(order: int) -> TruncatedSeries:
    return TruncatedSeries(np.zeros(order + 1, dtype=complex))


def one(order: int) -> TruncatedSeries:
    c = np.zeros(order + 1, dtype=complex)
    c[0] = 1.0
    return TruncatedSeries(c)


def monomial(degree: int, order: int) -> TruncatedSeries:
    """The monomial z**degree at the given truncation order."""
    if degree > order:
        raise ValueError(f"degree {degree} exceeds order {order}")
    c = np.zeros(order + 1, dtype=complex)
    c[degree] = 1.0
    return TruncatedSeries(c)


def compose_poly(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Composition f(g(z)) with f treated as an exact polynomial.

    Computes sum_j f(j) * g**j truncated at the common order.  Exact when f
    is a genuine polynomial of its stated degree; if f is the truncation of
    a longer series the dropped tail contaminates every output coefficient.
    """
    f._require_same_order(g)
    out = zero(f.order)
    power = one(f.order)
    for j in range(f.order + 1):
        if f.coeffs[j] != 0:
            out = out + f.coeffs[j] * power
        if j < f.order:
            power = power * g
    return TruncatedSeries(out.coeffs, min(f.exact_to, g.exact_to))


def exp_series(a: complex, order: int) -> TruncatedSeries:
    """exp(a*z) truncated: coefficient j is a**j / j! (stable recurrence)."""
    c = np.empty(order + 1, dtype=complex)
    c[0] = 1.0
    for j in range(order):
        c[j + 1] = c[j] * a / (j + 1)
    return TruncatedSeries(c)


def binomial_series(lam: complex, eta: complex, order: int) -> TruncatedSeries:
    """(1 - lam*z)**(-eta) truncated.

    Coefficient j is lam**j * prod_{m<j}(eta + m) / j!, computed by the
    recurrence c_{j+1} = c_j * lam * (eta + j) / (j + 1), which stays in
    range for orders in the hundreds where factorial ratios would overflow.
    """
    c = np.empty(order + 1, dtype=complex)
    c[0] = 1.0
    for j in range(order):
        c[j + 1] = c[j] * lam * (eta + j) / (j + 1)
    return TruncatedSeries(c)


# -- JSON wire format ---------------------------------------------------------


def series_to_json(f: TruncatedSeries) -> dict:
    """JSON shape {"order": N, "coeffs": [[re, im], ...]}."""
    return {
        "order": f.order,
        "coeffs": [[float(c.real), float(c.imag)] for c in f.coeffs],
    }


def series_from_json(obj: dict) -> TruncatedSeries:
    coeffs = [complex(re, im) for re, im in obj["coeffs"]]
    if len(coeffs) != int(obj["order"]) + 1:
        raise ValueError("coefficient count does not match the declared order")
    return TruncatedSeries(np.asarray(coeffs, dtype=complex))
