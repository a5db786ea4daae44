"""Evaluation measures: sign-invariant SRER, code consistency, PSNR, SSIM.

Quadratic measurements are blind to a global sign flip of the signal, so
reconstruction error is always taken over the better of +-x_hat.  SRER and
PSNR return +inf for (numerically) exact recovery; CSV writers cap that at
the 300 dB sentinel to keep files numeric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["MetricReport", "srer", "consistency", "psnr", "ssim"]


@dataclass
class MetricReport:
    srer_db: float = np.nan
    consistency: float = np.nan
    psnr_db: float = None
    ssim: float = None


def srer(x_true, x_hat):
    """Sign-invariant signal-to-reconstruction-error ratio in dB.

    10 log10( max over alpha in {-1, +1} of ||x*||^2 / ||alpha x_hat - x*||^2 );
    +inf when the best-sign error is below 1e-15 ||x*||^2.
    """
    x_true = np.asarray(x_true, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    if x_true.shape != x_hat.shape:
        raise ValueError(f"shape mismatch: {x_true.shape} vs {x_hat.shape}")
    signal = float(x_true @ x_true)
    if signal == 0.0:
        raise ValueError("SRER is undefined for a zero ground truth")
    err = min(float(np.sum((x_hat - x_true) ** 2)),
              float(np.sum((x_hat + x_true) ** 2)))
    if err < 1e-15 * signal:
        return float("inf")
    return 10.0 * np.log10(signal / err)


def consistency(y, ensemble, x_hat):
    """Fraction of codes strictly explained by x_hat.

    Counts i with y_i (|<a_i, x_hat>|^2 - tau) > 0, using the same
    quadratic-measurement rule as the encoder.
    """
    if ensemble.m == 0 or y.m == 0:
        raise ValueError("need at least one measurement")
    if y.m != ensemble.m:
        raise ValueError("measurement/ensemble size mismatch")
    q = ensemble.project(np.asarray(x_hat, dtype=float))
    agrees = y.codes * (q - y.tau) > 0
    return float(np.count_nonzero(agrees)) / y.m


def psnr(img_true, img_hat):
    """Peak SNR in dB: 20 log10(255 sqrt(n) / ||I - I_hat||_F), n = pixel count."""
    a = np.asarray(img_true, dtype=float)
    b = np.asarray(img_hat, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    fro = float(np.linalg.norm(a - b))
    if fro == 0.0:
        return float("inf")
    return 20.0 * np.log10(255.0 * np.sqrt(a.size) / fro)


def ssim(img_true, img_hat, window=8, k1=0.01, k2=0.03, dynamic_range=255.0):
    """Mean local structural similarity over sliding windows.

    Uniform (unweighted) window of the given size, stride 1, population
    moments, constants C1 = (k1 L)^2 and C2 = (k2 L)^2 with L = 255.
    """
    a = np.asarray(img_true, dtype=float)
    b = np.asarray(img_hat, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.ndim != 2 or min(a.shape) < window:
        raise ValueError(f"images must be 2-d with min dimension >= {window}")
    wa = np.lib.stride_tricks.sliding_window_view(a, (window, window))
    wb = np.lib.stride_tricks.sliding_window_view(b, (window, window))
    axes = (2, 3)
    mu_a = wa.mean(axis=axes)
    mu_b = wb.mean(axis=axes)
    ea2 = (wa * wa).mean(axis=axes)
    eb2 = (wb * wb).mean(axis=axes)
    eab = (wa * wb).mean(axis=axes)
    var_a = ea2 - mu_a * mu_a
    var_b = eb2 - mu_b * mu_b
    cov = eab - mu_a * mu_b
    c1 = (k1 * dynamic_range) ** 2
    c2 = (k2 * dynamic_range) ** 2
    score = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) / (
        (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    )
    return float(score.mean())
