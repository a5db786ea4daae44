"""Dense symmetric-matrix primitives shared by the solvers.

Everything here operates on plain float64 numpy arrays.  A "symmetric
matrix" is an (n, n) array with S == S.T; callers that assemble matrices
from sums of outer products get this for free, everyone else goes through
:func:`check_symmetric`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EigenPair",
    "check_symmetric",
    "trace_inner",
    "power_iteration",
    "rank1_psd_project",
]


@dataclass(frozen=True)
class EigenPair:
    """An eigenvalue together with a unit-norm eigenvector.

    ``degenerate`` marks the case where the input matrix annihilated the
    start vector (e.g. the zero matrix), in which case ``value`` is 0 and
    ``vector`` is an arbitrary unit vector.
    """

    value: float
    vector: np.ndarray
    degenerate: bool = False


def check_symmetric(S, name="matrix"):
    """Validate and return S as a square symmetric float64 array."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"{name} must be square, got shape {S.shape}")
    if not np.array_equal(S, S.T):
        # tolerate roundoff-level asymmetry from accumulated sums
        if not np.allclose(S, S.T, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(S).max()))):
            raise ValueError(f"{name} is not symmetric")
        S = 0.5 * (S + S.T)
    return S


def trace_inner(A, X):
    """Frobenius inner product sum_jk A[j,k] X[j,k], equal to Tr(A X) for symmetric A, X."""
    A = np.asarray(A, dtype=float)
    X = np.asarray(X, dtype=float)
    if A.shape != X.shape or A.ndim != 2:
        raise ValueError(f"dimension mismatch: {A.shape} vs {X.shape}")
    return float(np.tensordot(A, X))


_START_CACHE = {}


def _start_vector(n, seed):
    key = (n, seed)
    cached = _START_CACHE.get(key)
    if cached is None:
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(n)
        nrm = np.linalg.norm(v)
        while nrm == 0.0:  # astronomically unlikely, but keeps the contract total
            v = rng.standard_normal(n)
            nrm = np.linalg.norm(v)
        cached = v / nrm
        if len(_START_CACHE) < 4096:
            _START_CACHE[key] = cached
    return cached.copy()


def power_iteration(S, tol=1e-10, max_iter=10000, seed=0):
    """Dominant (largest |lambda|) eigenpair of a symmetric matrix.

    Iterates v <- S v / ||S v|| from a seeded random unit start.  The stop
    rule is a posteriori: the residual ||S v - lambda v|| must fall below
    tol * |lambda| * (1 - rho_hat), where rho_hat is the convergence rate
    estimated from successive residuals.  The rate factor matters because
    the eigenvector angle error is about residual / (|lambda| (1 - rho));
    without it a small spectral gap silently inflates the error.  The
    residual criterion is strictly stronger than comparing successive
    Rayleigh quotients, which the rank-1 projection's accuracy needs.

    If S annihilates the start vector, the start is re-drawn once; if the
    matrix also annihilates the second draw (e.g. S == 0) the result is
    flagged degenerate with value 0.
    """
    S = check_symmetric(S)
    n = S.shape[0]
    if tol <= 0:
        raise ValueError("tol must be positive")
    if n == 1:
        return EigenPair(float(S[0, 0]), np.ones(1))

    v = _start_vector(n, seed)
    redrawn = False
    lam = 0.0
    prev_gap = None
    prev_resid = None
    rate_sq = None
    for _ in range(max_iter):
        z = S @ v
        zz = float(z @ z)
        if zz < 1e-300:
            if redrawn:
                return EigenPair(0.0, v, degenerate=True)
            v = _start_vector(n, seed + 1)
            redrawn = True
            continue
        lam = float(v @ z)  # Rayleigh quotient
        # ||z||^2 - lam^2 equals the squared residual up to cancellation
        # noise (~eps ||z||^2): use it as a free screen and rate probe,
        # and compute the exact residual only once it reports convergence
        gap = zz - lam * lam
        floor = 4e-16 * zz
        if prev_gap is not None and gap > floor and prev_gap > floor:
            rate_sq = gap / prev_gap
        prev_gap = gap
        if gap <= max((tol * lam) ** 2, floor):
            r = z - lam * v
            resid_sq = float(r @ r)
            if prev_resid is not None and prev_resid > 0.0:
                rate_sq = resid_sq / prev_resid
            prev_resid = resid_sq
            guard = 1.0
            if rate_sq is not None:
                guard = max(1.0 - np.sqrt(min(rate_sq, 1.0)), 1e-3)
            if resid_sq <= (tol * lam * guard) ** 2:
                break
        else:
            prev_resid = None
        v = z / np.sqrt(zz)
    return EigenPair(lam, v)


def _gershgorin_lower(S):
    # lower bound on the smallest eigenvalue: min_i (S_ii - sum_{j != i} |S_ij|)
    radii = np.sum(np.abs(S), axis=1) - np.abs(np.diag(S))
    return float(np.min(np.diag(S) - radii))


def rank1_psd_project(S, tol=1e-10, max_iter=10000, seed=0):
    """Nearest rank-1 PSD matrix lambda_1 v_1 v_1^T in Frobenius norm.

    (lambda_1, v_1) is the algebraically largest eigenpair.  Power
    iteration converges to the largest eigenvalue in magnitude, so S is
    shifted by c = max(0, -gershgorin_lower(S)) first, which makes every
    eigenvalue nonnegative, and c is subtracted afterwards.  If
    lambda_1 <= 0 the projection is the zero matrix and the returned pair
    has value 0 (its unit vector is still the iteration's output).

    Default tol keeps the projection error far below the solvers'
    line-search precision of 1e-5.
    """
    S = check_symmetric(S)
    n = S.shape[0]
    c = max(0.0, -_gershgorin_lower(S))
    if c > 0.0:
        shifted = S + c * np.eye(n)
    else:
        shifted = S
    pair = power_iteration(shifted, tol=tol, max_iter=max_iter, seed=seed)
    lam = pair.value - c
    if pair.degenerate:
        # shifted matrix was (numerically) zero: every eigenvalue equals -c
        lam = -c if c > 0.0 else 0.0
    if lam <= 0.0:
        return np.zeros((n, n)), EigenPair(0.0, pair.vector, degenerate=pair.degenerate)
    X = lam * np.outer(pair.vector, pair.vector)
    return X, EigenPair(lam, pair.vector)


def rank1_factor(pair):
    """Factor x with x x^T equal to the projected matrix: sqrt(max(value, 0)) * vector."""
    lam = max(pair.value, 0.0)
    return np.sqrt(lam) * pair.vector
