"""Quadratic-loss baseline over the same lifted geometry.

The baseline cannot digest +-1 codes directly (no signal minimizes a
squared distance to the symbols), so the codes are first re-encoded with
the conditional means of the chi^2_1 density on the two sides of the
threshold.  The solver then minimizes

    Q(X) = sum_i (Tr(A_i X) - p_i)^2

with the identical rank-1 projection and momentum schedule as the
consistency solver; the step size has a closed form because Q is a
quadratic along any ray.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .measurement import BinaryMeasurements, interval_centroids
from .metrics import srer
from .solver import SolverConfig, _consistency_from_q, _lifted_descent, _nan_metrics

__all__ = [
    "PseudoMeasurements",
    "centroid_decode",
    "phaselift_cost",
    "phaselift_gradient",
    "phaselift_step",
    "phaselift_run",
]


@dataclass(frozen=True)
class PseudoMeasurements:
    """Centroid-decoded measurement targets with their binary source."""

    values: np.ndarray
    source: BinaryMeasurements


def centroid_decode(y):
    """Map code -1 to the low-interval centroid and +1 to the high one."""
    c_low, c_high = interval_centroids(y.tau)
    values = np.where(y.codes > 0, c_high, c_low)
    return PseudoMeasurements(values, y)


def _residuals(X, ensemble, p):
    if np.shape(X) != (ensemble.n, ensemble.n):
        raise ValueError(
            f"iterate has shape {np.shape(X)}, expected ({ensemble.n}, {ensemble.n})"
        )
    if p.values.shape[0] != ensemble.m:
        raise ValueError("measurement/ensemble size mismatch")
    return ensemble.quad_forms(X) - p.values


def phaselift_cost(X, ensemble, p):
    r = _residuals(X, ensemble, p)
    return float(r @ r)


def phaselift_gradient(X, ensemble, p):
    """grad Q(X) = 2 sum_i (Tr(A_i X) - p_i) A_i."""
    return ensemble.apply_weights(2.0 * _residuals(X, ensemble, p))


def phaselift_step(X, G, ensemble, p):
    """Exact minimizer of eta -> Q(X - eta G), in closed form.

    eta = sum_i r_i Tr(A_i G) / sum_i Tr(A_i G)^2 with r_i the current
    residuals.  A (numerically) zero denominator means G is invisible to
    the measurements; the step degenerates to 0 with a warning.
    """
    r = _residuals(X, ensemble, p)
    g = ensemble.quad_forms(G)
    denom = float(g @ g)
    if denom < 1e-30:
        warnings.warn("degenerate search direction: Tr(A_i G) = 0 for all i",
                      RuntimeWarning, stacklevel=2)
        return 0.0
    return float(r @ g) / denom


def phaselift_run(ensemble, p, config=None, ground_truth=None):
    """Minimize Q with the shared projected-momentum loop; returns a RunTrace.

    The consistency column of the trace is still measured against the
    binary source codes, so the two solvers are directly comparable.
    """
    if config is None:
        config = SolverConfig()
    if p.values.shape[0] != ensemble.m:
        raise ValueError("measurement/ensemble size mismatch")
    targets = p.values

    def cost_from_q(q):
        r = q - targets
        return float(r @ r)

    def weights_from_q(q):
        return 2.0 * (q - targets)

    def step_fn(q_point, g):
        denom = float(g @ g)
        if denom < 1e-30:
            warnings.warn("degenerate search direction: Tr(A_i G) = 0 for all i",
                          RuntimeWarning, stacklevel=3)
            return 0.0
        return float((q_point - targets) @ g) / denom

    if ground_truth is None:
        metrics_fn = _nan_metrics
    else:
        def metrics_fn(x_hat, q_hat):
            return srer(ground_truth, x_hat), _consistency_from_q(p.source, q_hat)

    return _lifted_descent(ensemble, cost_from_q, weights_from_q, step_fn,
                           config, metrics_fn)
