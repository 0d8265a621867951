"""Weight sequences, space classification, kernels, and norms.

A weighted Hardy space is described by its weight sequence beta, with
beta(0) = 1 and beta(j) = ||z^j||.  The reciprocal squares 1/beta(j)^2 are
the coefficients of the space's generating function k, which in turn
produces the reproducing kernels K_w(z) = k(conj(w) z).

Classification asks whether the first two weights are consistent with one
of the two hospitable families:

* exponential: k(z) = exp(z / beta(1)^2), when gamma = 2 beta(1)^4 / beta(2)^2
  equals 1 (a Fock space in disguise);
* binomial: k(z) = (1 - lam z)**(-1/(lam beta(1)^2)) with
  lam = (gamma - 1)/beta(1)^2 in (0, 1] (Hardy, weighted Bergman, and their
  lam < 1 dilates).

Everything else is inhospitable to nontrivial Hermitian weighted
composition operators; `classify_space` reports which bound failed, and
`verify_candidate` checks the full coefficient sequence, not just the two
moments the classifier sees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .series import OrderMismatchError, TruncatedSeries, binomial_series, exp_series

__all__ = [
    "DomainError",
    "QuadratureError",
    "WeightSequence",
    "Exponential",
    "Binomial",
    "NotHospitable",
    "SpaceClass",
    "CoefficientMismatch",
    "CLASSIFICATION_TOL",
    "classify_space",
    "verify_candidate",
    "classify_weights",
    "family_weights",
    "hardy_weights",
    "bergman_weights",
    "fock_weights",
    "dirichlet_weights",
    "flat_weights",
    "weights_from_generating",
    "kernel",
    "kernel_d",
    "kernel_dd",
    "inner_product",
    "norm",
    "fock_norm_quadrature",
    "bergman_norm_quadrature",
    "hardy_norm_quadrature",
    "DerivativeNormBounds",
    "derivative_norm_bounds",
    "weights_to_json",
    "weights_from_json",
    "space_class_to_json",
]


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class QuadratureError(RuntimeError):
    """A quadrature configuration cannot deliver the requested accuracy."""


#: Relative tolerance for the gamma = 1 and lam-endpoint decisions.  The
#: families are well separated; anything closer than this to a boundary is
#: treated as sitting on it.
CLASSIFICATION_TOL = 1e-9


# ---------------------------------------------------------------------------
# weight sequences


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Monomial norms beta(0..N) with beta(0) = 1 and beta(j) > 0."""

    beta: np.ndarray
    provenance: str = "explicit"

    def __post_init__(self):
        b = np.array(self.beta, dtype=float)
        if b.ndim != 1 or b.size == 0:
            raise ValueError("beta must be a nonempty one-dimensional sequence")
        if abs(b[0] - 1.0) > 1e-12:
            raise ValueError(f"beta(0) must be 1 (got {b[0]})")
        b[0] = 1.0
        if np.any(b <= 0.0):
            raise ValueError("all weights must be strictly positive")
        b.setflags(write=False)
        object.__setattr__(self, "beta", b)

    @property
    def order(self) -> int:
        return self.beta.size - 1

    def generating_coefficients(self) -> np.ndarray:
        """Coefficients 1/beta(j)^2 of the generating function."""
        return 1.0 / self.beta**2


def weights_from_generating(k: TruncatedSeries) -> WeightSequence:
    """Weights with 1/beta(j)^2 equal to the coefficients of ``k``.

    Requires every coefficient to be real and strictly positive.
    """
    c = k.coeffs
    if np.any(np.abs(c.imag) > 1e-14 * (1 + np.abs(c.real))):
        raise ValueError("generating coefficients must be real")
    re = c.real
    if np.any(re <= 0.0):
        bad = int(np.argmax(re <= 0.0))
        raise ValueError(f"generating coefficient {bad} is not positive: {re[bad]}")
    return WeightSequence(1.0 / np.sqrt(re), provenance="generating-function")


def family_weights(cls: "SpaceClass", order: int) -> WeightSequence:
    """Weight sequence of a hospitable family member."""
    if isinstance(cls, Exponential):
        k = exp_series(1.0 / cls.b_sq, order)
    elif isinstance(cls, Binomial):
        k = binomial_series(cls.lam, cls.eta, order)
    else:
        raise ValueError("family weights exist only for hospitable classes")
    ws = weights_from_generating(k)
    return WeightSequence(ws.beta, provenance="family")


def hardy_weights(order: int) -> WeightSequence:
    """beta(j) = 1: the classical Hardy space of the disk."""
    return WeightSequence(np.ones(order + 1), provenance="family")


def bergman_weights(eta: float, order: int) -> WeightSequence:
    """Weights of the space with generating function (1-z)**(-eta)."""
    return family_weights(Binomial(lam=1.0, eta=float(eta), gamma=(eta + 1.0) / eta), order)


def fock_weights(b: float, order: int) -> WeightSequence:
    """beta(j) = sqrt(j!) * b**j: the Gaussian-integral space with scale b."""
    if b <= 0:
        raise ValueError("the scale b must be positive")
    return family_weights(Exponential(b_sq=b * b), order)


def dirichlet_weights(order: int) -> WeightSequence:
    """beta(j)^2 = j + 1: the classical Dirichlet space (a rejection case)."""
    return WeightSequence(np.sqrt(np.arange(order + 1) + 1.0))


def flat_weights(order: int, level: float = 2.0) -> WeightSequence:
    """beta(0) = 1 and beta(j) = level for j >= 1 (norm-equivalent to Hardy)."""
    b = np.full(order + 1, float(level))
    b[0] = 1.0
    return WeightSequence(b)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Exponential:
    """k(z) = exp(z / b_sq); the space is a Fock space of scale sqrt(b_sq)."""

    b_sq: float
    gamma: float = 1.0

    variant = "Exponential"


@dataclass(frozen=True)
class Binomial:
    """k(z) = (1 - lam z)**(-eta) with 0 < lam <= 1 and eta = 1/(lam b^2)."""

    lam: float
    eta: float
    gamma: float

    variant = "Binomial"


@dataclass(frozen=True)
class CoefficientMismatch:
    index: int
    expected: float
    found: float


@dataclass(frozen=True)
class NotHospitable:
    """No nontrivial Hermitian weighted composition operator can exist."""

    reason: str  # "lambda-negative" | "lambda-exceeds-one" | "coefficient-mismatch"
    gamma: float
    lam: float
    mismatch: CoefficientMismatch | None = None

    variant = "NotHospitable"


SpaceClass = Exponential | Binomial | NotHospitable


def classify_space(beta1: float, beta2: float, tol: float = CLASSIFICATION_TOL) -> SpaceClass:
    """Classify a space from its first two weights.

    Computes gamma = 2 beta1^4 / beta2^2.  gamma = 1 selects the exponential
    family; otherwise lam = (gamma - 1) / beta1^2 must land in (0, 1] for the
    binomial family, and anything else is inhospitable.  lam within ``tol``
    of 0 is folded into the exponential family (its lam -> 0 limit).
    """
    if beta1 <= 0 or beta2 <= 0:
        raise ValueError("weights must be strictly positive")
    b1_sq = float(beta1) * float(beta1)
    gamma = 2.0 * b1_sq * b1_sq / (float(beta2) * float(beta2))
    lam = (gamma - 1.0) / b1_sq
    if abs(gamma - 1.0) <= tol or abs(lam) <= tol:
        return Exponential(b_sq=b1_sq, gamma=gamma)
    if lam < 0.0:
        return NotHospitable(reason="lambda-negative", gamma=gamma, lam=lam)
    if lam > 1.0 + tol:
        return NotHospitable(reason="lambda-exceeds-one", gamma=gamma, lam=lam)
    lam = min(lam, 1.0)
    return Binomial(lam=lam, eta=1.0 / (lam * b1_sq), gamma=gamma)


def verify_candidate(
    ws: WeightSequence, cls: SpaceClass, tol: float = 1e-10
) -> CoefficientMismatch | None:
    """Check every weight against the classified family's closed form.

    The classifier only sees beta(1) and beta(2); this compares 1/beta(j)^2
    with the candidate generating coefficients for all j up to the order.
    Returns None when all coefficients agree to relative ``tol``, else the
    first mismatch (``expected`` is what the weights say, ``found`` what the
    family predicts).
    """
    if isinstance(cls, NotHospitable):
        raise ValueError("cannot verify an inhospitable classification")
    if isinstance(cls, Exponential):
        candidate = exp_series(1.0 / cls.b_sq, ws.order).coeffs.real
    else:
        candidate = binomial_series(cls.lam, cls.eta, ws.order).coeffs.real
    actual = ws.generating_coefficients()
    for j in range(ws.order + 1):
        denom = max(abs(actual[j]), abs(candidate[j]))
        if abs(actual[j] - candidate[j]) > tol * denom:
            return CoefficientMismatch(
                index=j, expected=float(actual[j]), found=float(candidate[j])
            )
    return None


def classify_weights(
    ws: WeightSequence,
    tol_class: float = CLASSIFICATION_TOL,
    tol_fit: float = 1e-10,
) -> SpaceClass:
    """Classify from beta(1), beta(2) and then vet the whole sequence."""
    if ws.order < 2:
        raise ValueError("classification needs weights up to index 2")
    cls = classify_space(float(ws.beta[1]), float(ws.beta[2]), tol=tol_class)
    if isinstance(cls, NotHospitable):
        return cls
    mismatch = verify_candidate(ws, cls, tol=tol_fit)
    if mismatch is not None:
        return NotHospitable(
            reason="coefficient-mismatch",
            gamma=cls.gamma,
            lam=cls.lam if isinstance(cls, Binomial) else 0.0,
            mismatch=mismatch,
        )
    return cls


# ---------------------------------------------------------------------------
# kernels and inner products


def _check_kernel_point(w: complex) -> complex:
    w = complex(w)
    if abs(w) >= 1.0:
        raise DomainError(f"kernel points must lie in the open unit disk (|w| = {abs(w)})")
    return w


def _kernel_order(ws: WeightSequence, order: int | None) -> int:
    n = ws.order if order is None else order
    if n > ws.order:
        raise ValueError("kernel order exceeds the weight sequence order")
    return n


def kernel(w: complex, ws: WeightSequence, order: int | None = None) -> TruncatedSeries:
    """Reproducing kernel K_w: coefficient j is conj(w)^j / beta(j)^2."""
    w = _check_kernel_point(w)
    n = _kernel_order(ws, order)
    j = np.arange(n + 1)
    return TruncatedSeries(np.conj(w) ** j / ws.beta[: n + 1] ** 2)


def kernel_d(w: complex, ws: WeightSequence, order: int | None = None) -> TruncatedSeries:
    """Kernel reproducing f'(w): coefficient j is j conj(w)^(j-1) / beta(j)^2."""
    w = _check_kernel_point(w)
    n = _kernel_order(ws, order)
    c = np.zeros(n + 1, dtype=complex)
    j = np.arange(1, n + 1)
    c[1:] = j * np.conj(w) ** (j - 1) / ws.beta[1 : n + 1] ** 2
    return TruncatedSeries(c)


def kernel_dd(w: complex, ws: WeightSequence, order: int | None = None) -> TruncatedSeries:
    """Kernel reproducing f''(w): coefficient j is j(j-1) conj(w)^(j-2) / beta(j)^2."""
    w = _check_kernel_point(w)
    n = _kernel_order(ws, order)
    c = np.zeros(n + 1, dtype=complex)
    j = np.arange(2, n + 1)
    c[2:] = j * (j - 1) * np.conj(w) ** (j - 2) / ws.beta[2 : n + 1] ** 2
    return TruncatedSeries(c)


def _require_weight_order(f: TruncatedSeries, ws: WeightSequence) -> None:
    if f.order != ws.order:
        raise OrderMismatchError(
            f"series order {f.order} does not match weight order {ws.order}"
        )


def inner_product(f: TruncatedSeries, g: TruncatedSeries, ws: WeightSequence) -> complex:
    """<f, g> = sum_j f(j) conj(g(j)) beta(j)^2."""
    f._require_same_order(g)
    _require_weight_order(f, ws)
    return complex(np.sum(f.coeffs * np.conj(g.coeffs) * ws.beta**2))


def norm(f: TruncatedSeries, ws: WeightSequence) -> float:
    """The H^2(beta) norm sqrt(sum |f(j)|^2 beta(j)^2)."""
    _require_weight_order(f, ws)
    return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2 * ws.beta**2)))


# ---------------------------------------------------------------------------
# integral norms (independent quadrature oracles)


def _eval_on_grid(f: TruncatedSeries, radii: np.ndarray, n_angular: int) -> np.ndarray:
    """Angular means of |f|^2 on circles of the given radii.

    Evaluates f pointwise by Horner on the full polar grid; deliberately
    does *not* shortcut through the coefficient formula, so the quadrature
    stays an independent check on the series-side norms.
    """
    theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
    grid = radii[:, None] * np.exp(1j * theta)[None, :]
    vals = np.zeros_like(grid)
    for c in f.coeffs[::-1]:
        vals = vals * grid + c
    return np.mean(vals.real**2 + vals.imag**2, axis=1)


def _require_angular_resolution(f: TruncatedSeries, n_angular: int) -> int:
    # the angular factor of |f|^2 has modes up to +/- order; a uniform rule
    # with more points than that integrates it exactly
    needed = 2 * f.order + 1
    return max(n_angular, needed)


def fock_norm_quadrature(
    f: TruncatedSeries,
    b_sq: float,
    n_radial: int = 200,
    n_angular: int = 512,
) -> float:
    """Gaussian-integral norm of a polynomial: the radial-angular quadrature of
    (1/(pi b^2)) * integral |f(z)|^2 exp(-|z|^2/b^2) dA over the plane.

    The radial domain is truncated at |z|^2 = b^2 (60 + 2 N); the dropped
    tail is bounded and must be negligible relative to the result, else a
    QuadratureError reports the node configuration.
    """
    if b_sq <= 0:
        raise DomainError("b_sq must be positive")
    n_angular = _require_angular_resolution(f, n_angular)
    u_max = 60.0 + 2.0 * f.order
    x, v = roots_legendre(n_radial)
    u = 0.5 * u_max * (x + 1.0)
    vw = 0.5 * u_max * v
    b = math.sqrt(b_sq)
    means = _eval_on_grid(f, b * np.sqrt(u), n_angular)
    value = float(np.sum(vw * np.exp(-u) * means))
    tail = _fock_tail_bound(f, b, u_max)
    if not np.isfinite(value) or tail > 1e-9 * max(value, 1e-300):
        raise QuadratureError(
            f"Gaussian norm quadrature not converged: nodes {n_radial}x{n_angular}, "
            f"radial cutoff u={u_max:.1f}, tail bound {tail:.3e}, value {value:.3e}"
        )
    return math.sqrt(value)


def _fock_tail_bound(f: TruncatedSeries, b: float, u_max: float) -> float:
    """Upper bound for the dropped radial tail of the Gaussian integral."""
    from scipy.special import gammaincc, gamma as gamma_fn

    mags = np.abs(f.coeffs)
    nz = np.nonzero(mags)[0]
    total = 0.0
    for p in nz:
        for q in nz:
            s = 0.5 * (p + q) + 1.0
            total += mags[p] * mags[q] * b ** (p + q) * gamma_fn(s) * gammaincc(s, u_max)
    return float(total)


def bergman_norm_quadrature(
    f: TruncatedSeries,
    eta: float,
    n_radial: int = 200,
    n_angular: int = 512,
) -> float:
    """Disk-integral norm for the eta > 1 family:
    (eta - 1)/pi * integral |f(z)|^2 (1 - |z|^2)^(eta-2) dA over the disk.

    Uses Gauss-Jacobi nodes in s = |z|^2 (exact for the polynomial radial
    factor, including the integrable boundary singularity when eta < 2).
    The eta <= 1 spaces have no such integral form and are refused; their
    norms are series-side only, cross-checked by `derivative_norm_bounds`.
    """
    if eta <= 1.0:
        raise DomainError(
            "the disk-integral norm requires eta > 1; "
            "for eta <= 1 use the series norm and the derivative sandwich"
        )
    n_angular = _require_angular_resolution(f, n_angular)
    x, w = roots_jacobi(n_radial, eta - 2.0, 0.0)
    s = 0.5 * (x + 1.0)
    means = _eval_on_grid(f, np.sqrt(s), n_angular)
    value = float((eta - 1.0) * 2.0 ** (-(eta - 1.0)) * np.sum(w * means))
    if not np.isfinite(value):
        raise QuadratureError(
            f"disk norm quadrature failed: nodes {n_radial}x{n_angular}, eta={eta}"
        )
    return math.sqrt(value)


def hardy_norm_quadrature(f: TruncatedSeries, n_angular: int = 512) -> float:
    """Circle-average norm (1/2pi) * integral |f(e^it)|^2 dt, by the uniform
    rule, which is exact once the node count exceeds twice the degree."""
    n_angular = _require_angular_resolution(f, n_angular)
    mean = _eval_on_grid(f, np.ones(1), n_angular)[0]
    return math.sqrt(float(mean))


# ---------------------------------------------------------------------------
# derivative-norm sandwich for the eta < 1 spaces


@dataclass(frozen=True)
class DerivativeNormBounds:
    lower: float
    value: float
    upper: float


def derivative_norm_bounds(f: TruncatedSeries, eta: float) -> DerivativeNormBounds:
    """Two-sided bounds tying ||f'|| in the eta+2 space to the eta space norm.

    For 0 < eta < 1 the derivative f' lands in the (integral-normable)
    eta + 2 space, and with T = sum_{j>=1} |f(j)|^2 beta_eta(j)^2,

        eta (eta + 1) / 2 * T  <=  ||f'||^2_{eta+2}  <=  (eta + 1) * T.

    ``value`` is the middle quantity computed by the series formula; the
    sandwich is re-checked here and a violation raises, since it would mean
    a coefficient bug rather than a tolerance issue.
    """
    if not (0.0 < eta < 1.0):
        raise DomainError(f"the derivative sandwich applies for 0 < eta < 1 (got {eta})")
    n = f.order
    k_eta = binomial_series(1.0, eta, n).coeffs.real
    t_weighted = float(np.sum(np.abs(f.coeffs[1:]) ** 2 / k_eta[1:]))
    if n >= 1:
        k_eta2 = binomial_series(1.0, eta + 2.0, n - 1).coeffs.real
        fprime = f.coeffs[1:] * np.arange(1, n + 1)
        value = float(np.sum(np.abs(fprime) ** 2 / k_eta2))
    else:
        value = 0.0
    lower = 0.5 * eta * (eta + 1.0) * t_weighted
    upper = (eta + 1.0) * t_weighted
    slack = 1e-12 * max(1.0, upper)
    if not (lower - slack <= value <= upper + slack):
        raise RuntimeError(
            f"derivative-norm sandwich violated: {lower} <= {value} <= {upper}"
        )
    return DerivativeNormBounds(lower=lower, value=value, upper=upper)


# ---------------------------------------------------------------------------
# JSON wire formats


def weights_to_json(ws: WeightSequence) -> dict:
    """JSON shape {"order": N, "beta": [...]}."""
    return {"order": ws.order, "beta": [float(b) for b in ws.beta]}


def weights_from_json(obj: dict) -> WeightSequence:
    beta = np.asarray(obj["beta"], dtype=float)
    if beta.size != int(obj["order"]) + 1:
        raise ValueError("weight count does not match the declared order")
    return WeightSequence(beta)


def space_class_to_json(cls: SpaceClass) -> dict:
    if isinstance(cls, Exponential):
        return {"variant": "Exponential", "b_sq": cls.b_sq, "gamma": cls.gamma}
    if isinstance(cls, Binomial):
        return {
            "variant": "Binomial",
            "lambda": cls.lam,
            "eta": cls.eta,
            "gamma": cls.gamma,
        }
    out = {
        "variant": "NotHospitable",
        "reason": cls.reason,
        "lambda": cls.lam,
        "gamma": cls.gamma,
    }
    if cls.mismatch is not None:
        out["mismatch"] = {
            "index": cls.mismatch.index,
            "expected": cls.mismatch.expected,
            "found": cls.mismatch.found,
        }
    return out
