"""Classification, kernels, inner products, and integral norms."""

import math

import numpy as np
import pytest

from wco.series import TruncatedSeries, monomial, polynomial
from wco.spaces import (
    Binomial,
    DomainError,
    Exponential,
    NotHospitable,
    WeightSequence,
    bergman_norm_quadrature,
    bergman_weights,
    classify_space,
    classify_weights,
    derivative_norm_bounds,
    dirichlet_weights,
    family_weights,
    flat_weights,
    fock_norm_quadrature,
    fock_weights,
    hardy_norm_quadrature,
    hardy_weights,
    inner_product,
    kernel,
    kernel_d,
    kernel_dd,
    norm,
    verify_candidate,
    weights_from_generating,
    weights_from_json,
    weights_to_json,
)


class TestClassify:
    def test_flat_weights_rejected_with_exact_lambda(self):
        cls = classify_space(2.0, 2.0)
        assert isinstance(cls, NotHospitable)
        assert cls.reason == "lambda-exceeds-one"
        assert abs(cls.lam - 1.75) < 1e-12

    def test_hardy(self):
        cls = classify_space(1.0, 1.0)
        assert isinstance(cls, Binomial)
        assert abs(cls.lam - 1.0) < 1e-12 and abs(cls.eta - 1.0) < 1e-12

    def test_bergman(self):
        cls = classify_space(math.sqrt(0.5), math.sqrt(1.0 / 3.0))
        assert isinstance(cls, Binomial)
        assert abs(cls.lam - 1.0) < 1e-9 and abs(cls.eta - 2.0) < 1e-9

    def test_gaussian_case(self):
        b_sq = 1.7
        cls = classify_space(math.sqrt(b_sq), math.sqrt(2.0 * b_sq * b_sq))
        assert isinstance(cls, Exponential)
        assert abs(cls.b_sq - b_sq) < 1e-12

    def test_negative_lambda_rejected(self):
        # beta2 large makes gamma < 1
        cls = classify_space(1.0, 10.0)
        assert isinstance(cls, NotHospitable)
        assert cls.reason == "lambda-negative"

    def test_nonpositive_inputs(self):
        with pytest.raises(ValueError):
            classify_space(0.0, 1.0)

    def test_tiny_lambda_folds_into_exponential(self):
        # lam within classification tolerance of zero is the gaussian limit
        b1 = 1.0
        for lam in (5e-10, -5e-10):
            gamma = 1.0 + lam * b1 * b1
            beta2 = math.sqrt(2.0 * b1**4 / gamma)
            cls = classify_space(b1, beta2)
            assert isinstance(cls, Exponential)

    def test_lambda_just_above_one_clamped(self):
        # within tolerance of the right endpoint counts as lam = 1
        b1 = 1.0
        lam = 1.0 + 5e-10
        beta2 = math.sqrt(2.0 * b1**4 / (1.0 + lam * b1 * b1))
        cls = classify_space(b1, beta2)
        assert isinstance(cls, Binomial)
        assert cls.lam == 1.0

    def test_family_round_trip(self):
        # classifying the first two family weights recovers the family
        for lam in (0.1, 0.25, 0.5, 1.0):
            for eta in (0.5, 1.0, 2.0, 3.7):
                ws = family_weights(Binomial(lam, eta, (eta + 1) / eta), 8)
                cls = classify_space(float(ws.beta[1]), float(ws.beta[2]))
                assert isinstance(cls, Binomial)
                assert abs(cls.lam - lam) < 1e-9 * max(1, lam)
                assert abs(cls.eta - eta) < 1e-9 * max(1, eta)
        for b in (0.5, 1.0, 2.0):
            ws = fock_weights(b, 8)
            cls = classify_space(float(ws.beta[1]), float(ws.beta[2]))
            assert isinstance(cls, Exponential)
            assert abs(cls.b_sq - b * b) < 1e-9 * max(1, b * b)


class TestVerifyCandidate:
    def test_hardy_ok(self):
        ws = hardy_weights(64)
        assert verify_candidate(ws, classify_weights(ws)) is None

    def test_dirichlet_fails_at_index_three(self):
        ws = dirichlet_weights(64)
        cls = classify_space(float(ws.beta[1]), float(ws.beta[2]))
        assert isinstance(cls, Binomial)
        assert abs(cls.lam - 5.0 / 6.0) < 1e-12
        assert abs(cls.eta - 3.0 / 5.0) < 1e-12
        mismatch = verify_candidate(ws, cls)
        assert mismatch is not None
        assert mismatch.index == 3
        assert abs(mismatch.expected - 0.25) < 1e-12
        # independent evaluation of lam^3 eta (eta+1)(eta+2) / 6
        lam, eta = 5.0 / 6.0, 3.0 / 5.0
        by_hand = lam**3 * eta * (eta + 1) * (eta + 2) / 6.0
        assert abs(mismatch.found - by_hand) < 1e-12
        assert abs(mismatch.expected - mismatch.found) > 9e-3

    def test_gaussian_weights_ok(self):
        for b in (0.5, 1.0, 2.0):
            ws = fock_weights(b, 64)
            cls = classify_weights(ws)
            assert isinstance(cls, Exponential)
            assert verify_candidate(ws, cls, tol=1e-10) is None

    def test_inhospitable_input_rejected(self):
        ws = flat_weights(8)
        with pytest.raises(ValueError):
            verify_candidate(ws, classify_space(2.0, 2.0))

    def test_classify_weights_flags_mismatch(self):
        cls = classify_weights(dirichlet_weights(16))
        assert isinstance(cls, NotHospitable)
        assert cls.reason == "coefficient-mismatch"
        assert cls.mismatch.index == 3


class TestWeightSequence:
    def test_beta0_must_be_one(self):
        with pytest.raises(ValueError):
            WeightSequence(np.array([2.0, 1.0]))

    def test_positive_required(self):
        with pytest.raises(ValueError):
            WeightSequence(np.array([1.0, -1.0]))

    def test_from_generating_requires_positive_coefficients(self):
        with pytest.raises(ValueError):
            weights_from_generating(polynomial([1.0, -0.5, 0.25]))

    def test_json_round_trip(self):
        ws = bergman_weights(2.5, 12)
        back = weights_from_json(weights_to_json(ws))
        assert np.allclose(back.beta, ws.beta)


class TestKernels:
    def test_kernel_at_origin_is_constant_one(self):
        for ws in (hardy_weights(16), fock_weights(1.5, 16), dirichlet_weights(16)):
            k0 = kernel(0.0, ws)
            assert np.allclose(k0.coeffs, monomial(0, 16).coeffs)

    def test_reproduces_monomial(self):
        ws = hardy_weights(32)
        w = 0.4 - 0.3j
        f = monomial(2, 32)
        assert abs(inner_product(f, kernel(w, ws), ws) - w**2) < 1e-14

    def test_derivative_kernel(self):
        ws = hardy_weights(16)
        f = polynomial([1, 2, 3], order=16)
        got = inner_product(f, kernel_d(0.3, ws), ws)
        assert abs(got - (2 + 6 * 0.3)) < 1e-12

    def test_reproducing_property_random(self):
        rng = np.random.default_rng(31)
        order = 48
        for ws in (hardy_weights(order), bergman_weights(2.0, order), fock_weights(1.0, order)):
            for _ in range(20):
                deg = rng.integers(0, order - 2)
                coeffs = np.zeros(order + 1, dtype=complex)
                coeffs[: deg + 1] = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
                f = TruncatedSeries(coeffs)
                w = 0.9 * rng.uniform(0, 1) * np.exp(2j * np.pi * rng.uniform())
                fd = f.derivative()
                fdd = fd.derivative()
                assert abs(inner_product(f, kernel(w, ws), ws) - f(w)) < 1e-10
                assert abs(inner_product(f, kernel_d(w, ws), ws) - fd(w)) < 1e-10
                assert abs(inner_product(f, kernel_dd(w, ws), ws) - fdd(w)) < 1e-10

    def test_kernel_norm_is_geometric_sum(self):
        ws = hardy_weights(64)
        w = 0.5
        k = kernel(w, ws)
        assert abs(inner_product(k, k, ws).real - 1.0 / (1.0 - w * w)) < 1e-12

    def test_outside_disk_rejected(self):
        with pytest.raises(DomainError):
            kernel(1.0, hardy_weights(4))


class TestInnerProduct:
    def test_monomial_orthogonality(self):
        ws = bergman_weights(3.0, 10)
        for i in range(5):
            for j in range(5):
                got = inner_product(monomial(i, 10), monomial(j, 10), ws)
                if i == j:
                    assert abs(got - ws.beta[j] ** 2) < 1e-15
                else:
                    assert got == 0

    def test_norm_matches_inner_product(self):
        rng = np.random.default_rng(37)
        ws = dirichlet_weights(20)
        f = TruncatedSeries(rng.standard_normal(21) + 1j * rng.standard_normal(21))
        assert abs(norm(f, ws) ** 2 - inner_product(f, f, ws).real) < 1e-12


class TestFockQuadrature:
    def test_monomials(self):
        for b in (0.5, 1.0, 2.0):
            for j in (0, 1, 3, 7, 20):
                f = monomial(j, j if j else 0)
                got = fock_norm_quadrature(f, b * b) ** 2
                want = b ** (2 * j) * math.factorial(j)
                assert abs(got - want) <= 1e-6 * want

    def test_constant_is_normalized(self):
        assert abs(fock_norm_quadrature(monomial(0, 0), 2.3) - 1.0) < 1e-12

    def test_one_plus_z(self):
        got = fock_norm_quadrature(polynomial([1, 1]), 1.0) ** 2
        assert abs(got - 2.0) <= 2e-6

    def test_agrees_with_series_norm(self):
        rng = np.random.default_rng(41)
        for b in (0.5, 1.0, 2.0):
            ws = fock_weights(b, 12)
            for _ in range(5):
                f = TruncatedSeries(rng.standard_normal(13) + 1j * rng.standard_normal(13))
                got = fock_norm_quadrature(f, b * b)
                want = norm(f, ws)
                assert abs(got - want) <= 1e-6 * want


class TestDiskQuadrature:
    def test_bergman_monomials(self):
        for eta in (2.0, 3.0):
            ws = bergman_weights(eta, 20)
            for j in (0, 1, 2, 5, 11, 20):
                f = monomial(j, j if j else 0)
                got = bergman_norm_quadrature(f, eta) ** 2
                want = float(ws.beta[j] ** 2)
                assert abs(got - want) <= 1e-8 * want

    def test_bergman_one_plus_z(self):
        got = bergman_norm_quadrature(polynomial([1, 1]), 3.0) ** 2
        assert abs(got - 4.0 / 3.0) < 1e-8

    def test_eta_at_most_one_refused(self):
        with pytest.raises(DomainError):
            bergman_norm_quadrature(monomial(1, 1), 1.0)

    def test_hardy_monomials(self):
        for j in (0, 1, 4, 9):
            got = hardy_norm_quadrature(monomial(j, j if j else 0))
            assert abs(got - 1.0) < 1e-10

    def test_agreement_random_polynomials(self):
        rng = np.random.default_rng(43)
        for eta in (2.0, 3.0, 5.5):
            ws = bergman_weights(eta, 12)
            for _ in range(5):
                f = TruncatedSeries(rng.standard_normal(13) + 1j * rng.standard_normal(13))
                got = bergman_norm_quadrature(f, eta)
                want = norm(f, ws)
                assert abs(got - want) <= 1e-6 * want
        ws = hardy_weights(12)
        for _ in range(5):
            f = TruncatedSeries(rng.standard_normal(13) + 1j * rng.standard_normal(13))
            assert abs(hardy_norm_quadrature(f) - norm(f, ws)) <= 1e-6 * norm(f, ws)


class TestDerivativeSandwich:
    def test_single_monomial_by_hand(self):
        # f = z at eta = 1/2: value 1, T = 2, bounds [0.75, 3]
        out = derivative_norm_bounds(monomial(1, 1), 0.5)
        assert abs(out.value - 1.0) < 1e-14
        assert abs(out.lower - 0.75) < 1e-14
        assert abs(out.upper - 3.0) < 1e-14

    def test_constant(self):
        out = derivative_norm_bounds(monomial(0, 4), 0.3)
        assert out.value == 0.0 and out.lower == 0.0 and out.upper == 0.0

    def test_random_sandwich(self):
        rng = np.random.default_rng(47)
        for eta in (0.1, 0.3, 0.7, 0.9):
            for _ in range(50):
                f = TruncatedSeries(rng.standard_normal(11) + 1j * rng.standard_normal(11))
                out = derivative_norm_bounds(f, eta)
                assert out.lower <= out.value * (1 + 1e-12) + 1e-12
                assert out.value <= out.upper * (1 + 1e-12) + 1e-12

    def test_eta_out_of_range(self):
        with pytest.raises(DomainError):
            derivative_norm_bounds(monomial(1, 1), 1.5)
