import numpy as np
import pytest

from bpr.linalg import (
    EigenPair,
    power_iteration,
    rank1_factor,
    rank1_psd_project,
    trace_inner,
)


def random_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, n))
    return 0.5 * (Z + Z.T)


class TestTraceInner:
    def test_identity(self):
        assert trace_inner(np.eye(4), np.eye(4)) == 4.0

    def test_lifting_identity(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal(6)
        x = rng.standard_normal(6)
        got = trace_inner(np.outer(a, a), np.outer(x, x))
        assert abs(got - (a @ x) ** 2) < 1e-12 * max(1.0, (a @ x) ** 2)

    def test_matches_elementwise_sum(self):
        # independent oracle: explicit double loop
        A = random_symmetric(3, 2)
        X = random_symmetric(3, 3)
        oracle = 0.0
        for j in range(3):
            for k in range(3):
                oracle += A[j, k] * X[j, k]
        assert abs(trace_inner(A, X) - oracle) < 1e-12

    def test_bilinear(self):
        rng = np.random.default_rng(4)
        for seed in range(5):
            A = random_symmetric(5, 10 + seed)
            B = random_symmetric(5, 20 + seed)
            X = random_symmetric(5, 30 + seed)
            alpha, beta = rng.standard_normal(2)
            lhs = trace_inner(alpha * A + beta * B, X)
            rhs = alpha * trace_inner(A, X) + beta * trace_inner(B, X)
            assert abs(lhs - rhs) < 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            trace_inner(np.eye(3), np.eye(4))


class TestPowerIteration:
    def test_diagonal(self):
        pair = power_iteration(np.diag([3.0, 1.0]))
        assert abs(pair.value - 3.0) < 1e-9
        assert abs(abs(pair.vector[0]) - 1.0) < 1e-9

    def test_rank_one(self):
        x = np.array([0.0, 2.0, 0.0])
        pair = power_iteration(np.outer(x, x))
        assert abs(pair.value - 4.0) < 1e-9
        assert np.allclose(np.abs(pair.vector), np.abs(x) / 2.0, atol=1e-9)

    def test_matches_dense_eigensolver(self):
        # dominant (largest |lambda|) eigenpair vs LAPACK oracle
        for seed in range(10):
            S = random_symmetric(8, 100 + seed)
            w, V = np.linalg.eigh(S)
            idx = int(np.argmax(np.abs(w)))
            pair = power_iteration(S, seed=seed)
            assert abs(pair.value - w[idx]) < 1e-8
            assert abs(abs(pair.vector @ V[:, idx]) - 1.0) < 1e-7

    def test_residual_bound(self):
        # matrices with a clear magnitude gap between the top two eigenvalues
        tol = 1e-10
        for seed in range(10):
            rng = np.random.default_rng(500 + seed)
            Q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
            lams = np.array([1.0, 0.7, 0.5, 0.2, -0.3, -0.6]) * (1 + seed / 10)
            S = (Q * lams) @ Q.T
            S = 0.5 * (S + S.T)
            pair = power_iteration(S, tol=tol, seed=seed)
            resid = np.linalg.norm(S @ pair.vector - pair.value * pair.vector)
            assert resid < 10 * tol * abs(pair.value)

    def test_zero_matrix_degenerate(self):
        pair = power_iteration(np.zeros((5, 5)))
        assert pair.degenerate
        assert pair.value == 0.0
        assert abs(np.linalg.norm(pair.vector) - 1.0) < 1e-12

    def test_unit_vector_invariant(self):
        for seed in range(5):
            pair = power_iteration(random_symmetric(7, seed), seed=seed)
            assert abs(np.linalg.norm(pair.vector) - 1.0) < 1e-12

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            power_iteration(np.eye(2), tol=0.0)


class TestRank1PsdProject:
    def test_fixed_point(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal(5)
        S = np.outer(x, x)
        P, pair = rank1_psd_project(S)
        assert np.linalg.norm(P - S) < 1e-9
        factor = rank1_factor(pair)
        assert min(np.linalg.norm(factor - x), np.linalg.norm(factor + x)) < 1e-7

    def test_diagonal(self):
        P, pair = rank1_psd_project(np.diag([3.0, 1.0]))
        assert np.allclose(P, np.diag([3.0, 0.0]), atol=1e-9)
        assert abs(pair.value - 3.0) < 1e-9

    def test_negative_definite_gives_zero(self):
        P, pair = rank1_psd_project(-np.eye(5))
        assert np.all(P == 0.0)
        assert pair.value == 0.0

    def test_zero_top_eigenvalue_gives_zero(self):
        P, pair = rank1_psd_project(np.diag([0.0, -1.0, -2.0]))
        assert np.all(P == 0.0)
        assert pair.value == 0.0

    def test_matches_dense_oracle(self):
        # nearest rank-1 PSD matrix from a full eigendecomposition
        rng = np.random.default_rng(12)
        for seed in range(30):
            n = int(rng.integers(2, 11))
            S = random_symmetric(n, 700 + seed)
            P, _ = rank1_psd_project(S, seed=seed)
            w, V = np.linalg.eigh(S)
            if w[-1] > 0:
                expected = w[-1] * np.outer(V[:, -1], V[:, -1])
            else:
                expected = np.zeros((n, n))
            assert np.linalg.norm(P - expected) < 1e-8

    def test_factor_consistency(self):
        S = random_symmetric(6, 77)
        P, pair = rank1_psd_project(S)
        factor = rank1_factor(pair)
        assert np.linalg.norm(P - np.outer(factor, factor)) < 1e-8

    def test_rejects_asymmetric(self):
        M = np.arange(9.0).reshape(3, 3)
        with pytest.raises(ValueError):
            rank1_psd_project(M)
