"""Fisher information and the estimation bound for noisy binary codes.

Model: y_i = sign(|a_i^T x|^2 + xi_i - tau) with xi_i ~ N(0, sigma^2), so
P(y_i = +1) = 1 - Phi(v_i) where v_i = tau - u_i^2, u_i = a_i^T x and Phi
is the N(0, sigma^2) c.d.f.  The log-likelihood, its gradient (score), and
the Fisher information

    I_x = sum_i 4 u_i^2 Phi'(v_i)^2 / (Phi(v_i) (1 - Phi(v_i))) A_i

follow directly; the bound on any unbiased estimator is Cov(x_hat) >=
I_x^{-1}.  Measurements far from the threshold saturate (Phi (1 - Phi)
underflows); their weights are clamped to zero, matching their vanishing
information content.

Only the real gaussian ensemble is supported: the derivation differentiates
u_i = a_i^T x for real rows, which is the setting the noisy experiments use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "FisherMatrix",
    "fisher_information",
    "score",
    "binary_log_likelihood",
    "crb_srer",
]

_SATURATION_FLOOR = 1e-300


@dataclass(frozen=True)
class FisherMatrix:
    """Fisher information with the model parameters that produced it."""

    entries: np.ndarray
    tau: float
    sigma: float

    @property
    def dim(self):
        return self.entries.shape[0]


def _gauss_cdf(v, sigma):
    # erfc form stays accurate deep in the tails
    return 0.5 * special.erfc(-v / (sigma * np.sqrt(2.0)))


def _gauss_pdf(v, sigma):
    return np.exp(-0.5 * (v / sigma) ** 2) / (sigma * np.sqrt(2.0 * np.pi))


def _model_terms(ensemble, x, tau, sigma):
    if sigma <= 0:
        raise ValueError("sigma must be positive (the noiseless model has no density)")
    if ensemble.is_complex:
        raise ValueError("Fisher information is implemented for the real gaussian ensemble")
    x = np.asarray(x, dtype=float)
    if x.shape != (ensemble.n,):
        raise ValueError(f"signal has shape {x.shape}, expected ({ensemble.n},)")
    u = ensemble.rows @ x
    v = tau - u * u
    phi = _gauss_cdf(v, sigma)
    dphi = _gauss_pdf(v, sigma)
    return u, v, phi, dphi


def fisher_information(ensemble, x, tau, sigma):
    """Assemble I_x as a FisherMatrix; saturated measurements contribute zero."""
    u, _, phi, dphi = _model_terms(ensemble, x, tau, sigma)
    denom = phi * (1.0 - phi)
    w = np.zeros(ensemble.m)
    ok = denom >= _SATURATION_FLOOR
    w[ok] = 4.0 * u[ok] ** 2 * dphi[ok] ** 2 / denom[ok]
    return FisherMatrix(ensemble.apply_weights(w), float(tau), float(sigma))


def binary_log_likelihood(y, ensemble, x, tau, sigma):
    """Log-likelihood of the observed codes at the candidate signal x."""
    if y.m != ensemble.m:
        raise ValueError("measurement/ensemble size mismatch")
    _, _, phi, _ = _model_terms(ensemble, x, tau, sigma)
    ybar = (1.0 + y.codes.astype(float)) / 2.0
    return float(
        np.sum(ybar * np.log(np.maximum(1.0 - phi, _SATURATION_FLOOR))
               + (1.0 - ybar) * np.log(np.maximum(phi, _SATURATION_FLOOR)))
    )


def score(y, ensemble, x, tau, sigma):
    """Gradient of the log-likelihood at x.

    sum_i [ ybar_i 2 u_i Phi'(v_i) / (1 - Phi(v_i))
            - (1 - ybar_i) 2 u_i Phi'(v_i) / Phi(v_i) ] a_i,
    with the same saturation clamping as the Fisher assembly.
    """
    if y.m != ensemble.m:
        raise ValueError("measurement/ensemble size mismatch")
    u, _, phi, dphi = _model_terms(ensemble, x, tau, sigma)
    ybar = (1.0 + y.codes.astype(float)) / 2.0
    coef = np.zeros(ensemble.m)
    up = (1.0 - phi) >= _SATURATION_FLOOR
    coef[up] += ybar[up] * 2.0 * u[up] * dphi[up] / (1.0 - phi[up])
    lo = phi >= _SATURATION_FLOOR
    coef[lo] -= (1.0 - ybar[lo]) * 2.0 * u[lo] * dphi[lo] / phi[lo]
    return ensemble.rows.T @ coef


def crb_srer(fisher, x):
    """SRER of an efficient unbiased estimator: 10 log10(||x||^2 / tr(I^{-1})).

    Raises if the Fisher matrix is numerically singular; a silent huge
    bound would be worse than no bound.
    """
    x = np.asarray(x, dtype=float)
    evals = np.linalg.eigvalsh(fisher.entries)
    if evals[0] <= 1e-12 * evals[-1] or evals[-1] <= 0.0:
        raise ValueError(
            "CRB undefined: Fisher matrix is numerically singular "
            f"(eigenvalue range [{evals[0]:.3e}, {evals[-1]:.3e}])"
        )
    trace_inv = float(np.sum(1.0 / evals))
    return 10.0 * np.log10(float(x @ x) / trace_inv)
