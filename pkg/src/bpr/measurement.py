"""Signal generators, sensing ensembles, thresholds, and binary encoding.

The measurement model: m quadratic measurements q_i = |<a_i, x>|^2 are
compared against a threshold tau > 0 (optionally after adding white
Gaussian noise) and reported only as codes y_i = sign(q_i + xi_i - tau),
with sign(0) := -1 so ties are reproducible.

Three ensemble kinds are supported:

* ``gaussian``      -- real rows a_i ~ N(0, I_n), lifted A_i = a_i a_i^T
* ``fourier-mask``  -- k blocks of DFT rows through random 0/1 diagonal
                       masks, m = k n complex rows
* ``plain-dft``     -- the same construction with identity masks

For complex rows the lifted form is A_i = re(a_i) re(a_i)^T +
im(a_i) im(a_i)^T, which is PSD of rank <= 2 and satisfies
Tr(A_i x x^T) = |a_i^H x|^2 for real x.  The DFT convention is the
unnormalized forward matrix exp(-2 pi i j k / n); any fixed scaling works
because the threshold is set from the realized measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

__all__ = [
    "SensingEnsemble",
    "BinaryMeasurements",
    "gen_unit_sphere_signal",
    "gen_two_sinusoid_signal",
    "gen_gaussian_ensemble",
    "gen_structured_illumination_ensemble",
    "chi1sq_cdf",
    "chi1sq_pdf",
    "chi1sq_quantile",
    "interval_centroids",
    "sigma_for_snr",
    "encode_binary",
    "empirical_median_threshold",
    "save_ensemble",
    "load_ensemble",
    "save_measurements",
    "load_measurements",
    "save_signal",
    "load_signal",
]

ENSEMBLE_KINDS = ("gaussian", "fourier-mask", "plain-dft")


# ---------------------------------------------------------------------------
# ensembles


@dataclass
class SensingEnsemble:
    """m sensing vectors with their rank-1 / rank-2 lifted forms.

    ``rows`` is (m, n): float64 for the gaussian kind, complex128 for the
    Fourier kinds.  Instances are treated as immutable after creation and
    may be shared across concurrent solver runs.
    """

    kind: str
    rows: np.ndarray
    seed: int = 0
    _re: np.ndarray = field(init=False, repr=False, default=None)
    _im: np.ndarray = field(init=False, repr=False, default=None)

    def __post_init__(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.kind == "gaussian":
            self.rows = np.asarray(self.rows, dtype=float)
            self._re = self.rows
            self._im = None
        else:
            self.rows = np.asarray(self.rows, dtype=complex)
            self._re = np.ascontiguousarray(self.rows.real)
            self._im = np.ascontiguousarray(self.rows.imag)

    @property
    def m(self):
        return self.rows.shape[0]

    @property
    def n(self):
        return self.rows.shape[1]

    @property
    def is_complex(self):
        return self.kind != "gaussian"

    def project(self, x):
        """Quadratic measurements |<a_i, x>|^2 for a real signal x, shape (m,)."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"signal has shape {x.shape}, expected ({self.n},)")
        q = (self._re @ x) ** 2
        if self._im is not None:
            q = q + (self._im @ x) ** 2
        return q

    def quad_forms(self, X):
        """Vector of Tr(A_i X) for a symmetric X, shape (m,)."""
        X = np.asarray(X, dtype=float)
        if X.shape != (self.n, self.n):
            raise ValueError(f"matrix has shape {X.shape}, expected ({self.n}, {self.n})")
        q = np.einsum("ij,ij->i", self._re @ X, self._re)
        if self._im is not None:
            q = q + np.einsum("ij,ij->i", self._im @ X, self._im)
        return q

    def apply_weights(self, w):
        """Weighted lift sum_i w_i A_i as a symmetric (n, n) matrix.

        Rows with zero weight are skipped; the one-sided losses hand in
        mostly-zero weight vectors once the iterate is nearly consistent.
        """
        w = np.asarray(w, dtype=float)
        if w.shape != (self.m,):
            raise ValueError(f"weights have shape {w.shape}, expected ({self.m},)")
        idx = np.flatnonzero(w)
        if idx.shape[0] == 0:
            return np.zeros((self.n, self.n))
        if 2 * idx.shape[0] < self.m:
            re, im, ww = self._re[idx], None, w[idx]
            if self._im is not None:
                im = self._im[idx]
        else:
            re, im, ww = self._re, self._im, w
        G = re.T @ (ww[:, None] * re)
        if im is not None:
            G = G + im.T @ (ww[:, None] * im)
        return 0.5 * (G + G.T)

    def lifted_trace(self):
        """Vector of Tr(A_i) = ||a_i||^2, shape (m,)."""
        t = np.einsum("ij,ij->i", self._re, self._re)
        if self._im is not None:
            t = t + np.einsum("ij,ij->i", self._im, self._im)
        return t

    def lifted_form(self, i):
        """The lifted matrix A_i, materialized on demand."""
        A = np.outer(self._re[i], self._re[i])
        if self._im is not None:
            A = A + np.outer(self._im[i], self._im[i])
        return A

    @property
    def lifted_forms(self):
        """All A_i stacked as an (m, n, n) array.  Intended for small instances."""
        A = np.einsum("mi,mj->mij", self._re, self._re)
        if self._im is not None:
            A = A + np.einsum("mi,mj->mij", self._im, self._im)
        return A


def gen_gaussian_ensemble(n, m, seed):
    """m i.i.d. N(0, I_n) sensing rows."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    rng = np.random.default_rng(seed)
    rows = rng.standard_normal((m, n))
    return SensingEnsemble("gaussian", rows, seed=seed)


def gen_structured_illumination_ensemble(n, k, seed, randomize=True):
    """k blocks of DFT rows through diagonal 0/1 masks, m = k n rows.

    With randomize=True each mask entry is 0 or 1 with probability 1/2
    (kind ``fourier-mask``); with randomize=False every mask is the
    identity, i.e. the plain oversampled-DFT stack (kind ``plain-dft``).
    """
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    j = np.arange(n)
    F = np.exp(-2j * np.pi * np.outer(j, j) / n)
    if randomize:
        rng = np.random.default_rng(seed)
        masks = rng.integers(0, 2, size=(k, n)).astype(float)
        kind = "fourier-mask"
    else:
        masks = np.ones((k, n))
        kind = "plain-dft"
    rows = (F[None, :, :] * masks[:, None, :]).reshape(k * n, n)
    return SensingEnsemble(kind, rows, seed=seed)


# ---------------------------------------------------------------------------
# signals


def gen_unit_sphere_signal(n, seed):
    """A point drawn uniformly at random from the unit sphere in R^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    return x / np.linalg.norm(x)


def gen_two_sinusoid_signal(n):
    """Sum-of-two-sinusoids test signal, normalized to unit l2 norm.

    Entry l is proportional to 1.5 sin(4 pi l / n) + 2.5 cos(14 pi l / n).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    ell = np.arange(n)
    x = 1.5 * np.sin(4 * np.pi * ell / n) + 2.5 * np.cos(14 * np.pi * ell / n)
    return x / np.linalg.norm(x)


# ---------------------------------------------------------------------------
# chi^2_1 threshold machinery


def chi1sq_cdf(x):
    """c.d.f. of the squared standard normal, via the error function."""
    x = np.asarray(x, dtype=float)
    out = np.where(x > 0, special.erf(np.sqrt(np.maximum(x, 0.0) / 2.0)), 0.0)
    return out if out.ndim else float(out)


def chi1sq_pdf(x):
    """p.d.f. of the squared standard normal (x > 0)."""
    return np.exp(-x / 2.0) / np.sqrt(2.0 * np.pi * x)


def chi1sq_quantile(p):
    """Quantile of chi^2_1 by bisection on [0, 50] to 1e-8 absolute."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly inside (0, 1)")
    lo, hi = 0.0, 50.0
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        if chi1sq_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def interval_centroids(tau):
    """Conditional means of chi^2_1 on [0, tau] and [tau, inf).

    These are the decoding targets that replace the -1 / +1 codes when a
    quadratic-loss solver needs numeric pseudo-measurements.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    p = chi1sq_cdf(tau)
    integrand = lambda x: x * chi1sq_pdf(x)
    lo_mass, _ = integrate.quad(integrand, 0.0, tau, epsabs=1e-10, epsrel=1e-10)
    hi_mass, _ = integrate.quad(integrand, tau, np.inf, epsabs=1e-10, epsrel=1e-10)
    return lo_mass / p, hi_mass / (1.0 - p)


# ---------------------------------------------------------------------------
# encoding


@dataclass(frozen=True)
class BinaryMeasurements:
    """The +-1 codes together with the threshold and noise level that made them."""

    codes: np.ndarray
    tau: float
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        codes = np.asarray(self.codes, dtype=np.int8)
        if codes.ndim != 1 or not np.all(np.abs(codes) == 1):
            raise ValueError("codes must be a 1-d array of +-1")
        object.__setattr__(self, "codes", codes)

    @property
    def m(self):
        return self.codes.shape[0]


def sigma_for_snr(ensemble, x, snr_db):
    """Noise level sigma that realizes a given input SNR (in dB).

    SNR_in = (1 / (m sigma^2)) sum_i q_i^2 with q_i the quadratic
    measurements, so sigma = sqrt(sum_i q_i^2 / (m 10^(snr_db/10))).
    """
    q = ensemble.project(x)
    total = float(np.sum(q**2))
    if total == 0.0:
        raise ValueError("SNR is undefined for an all-zero signal")
    return math.sqrt(total / (ensemble.m * 10.0 ** (snr_db / 10.0)))


def encode_binary(ensemble, x, tau, noise_sigma=0.0, seed=0):
    """Quantize the quadratic measurements of x to +-1 codes.

    y_i = +1 iff q_i + xi_i - tau > 0 (so sign(0) = -1), with
    xi_i ~ N(0, noise_sigma^2) drawn from the given seed, or exactly zero
    when noise_sigma == 0.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be nonnegative")
    q = ensemble.project(x)
    if noise_sigma > 0:
        q = q + np.random.default_rng(seed).normal(0.0, noise_sigma, size=ensemble.m)
    codes = np.where(q - tau > 0, 1, -1).astype(np.int8)
    return BinaryMeasurements(codes, float(tau), float(noise_sigma), int(seed))


def empirical_median_threshold(ensemble, x):
    """Median of the realized quadratic measurements.

    Used for the Fourier kinds, whose measurement distribution is not
    chi^2_1; splits the realized codes as evenly as possible.
    """
    if ensemble.m < 2:
        raise ValueError("need at least two measurements")
    return float(np.median(ensemble.project(x)))


# ---------------------------------------------------------------------------
# plain-text serialization (re-runnable experiments)


def _fmt(v):
    return repr(float(v))


def _fmt_complex(z):
    im = float(z.imag)
    sign = "+" if im >= 0 or math.isnan(im) else "-"
    return f"{float(z.real)!r}{sign}{abs(im)!r}j"


def save_ensemble(path, ensemble):
    """Write the sensing rows as CSV with a two-line kind/n/m/seed header."""
    with open(path, "w", newline="\n") as fh:
        fh.write("kind,n,m,seed\n")
        fh.write(f"{ensemble.kind},{ensemble.n},{ensemble.m},{ensemble.seed}\n")
        if ensemble.is_complex:
            for row in ensemble.rows:
                fh.write(",".join(_fmt_complex(z) for z in row) + "\n")
        else:
            for row in ensemble.rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")


def load_ensemble(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        values = fh.readline().strip().split(",")
        meta = dict(zip(header, values))
        kind = meta["kind"]
        n, m, seed = int(meta["n"]), int(meta["m"]), int(meta["seed"])
        conv = complex if kind != "gaussian" else float
        rows = np.array(
            [[conv(tok) for tok in line.strip().split(",")] for line in fh if line.strip()]
        )
    if rows.shape != (m, n):
        raise ValueError(f"{path}: expected {m}x{n} rows, got {rows.shape}")
    return SensingEnsemble(kind, rows, seed=seed)


def save_measurements(path, meas, ensemble):
    """Write the codes as CSV with a kind/n/m/tau/sigma/seed header."""
    if meas.m != ensemble.m:
        raise ValueError("measurement/ensemble size mismatch")
    with open(path, "w", newline="\n") as fh:
        fh.write("kind,n,m,tau,sigma,seed\n")
        fh.write(
            f"{ensemble.kind},{ensemble.n},{ensemble.m},"
            f"{_fmt(meas.tau)},{_fmt(meas.noise_sigma)},{meas.seed}\n"
        )
        fh.write("y\n")
        for c in meas.codes:
            fh.write(f"{int(c)}\n")


def load_measurements(path):
    """Read codes back; returns (BinaryMeasurements, metadata dict)."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        values = fh.readline().strip().split(",")
        meta = dict(zip(header, values))
        col = fh.readline().strip()
        if col != "y":
            raise ValueError(f"{path}: expected code column header 'y', got {col!r}")
        codes = np.array([int(line) for line in fh if line.strip()], dtype=np.int8)
    meas = BinaryMeasurements(
        codes, float(meta["tau"]), float(meta["sigma"]), int(meta["seed"])
    )
    if meas.m != int(meta["m"]):
        raise ValueError(f"{path}: header says m={meta['m']} but found {meas.m} codes")
    return meas, meta


def save_signal(path, x):
    x = np.asarray(x, dtype=float)
    with open(path, "w", newline="\n") as fh:
        fh.write("n\n")
        fh.write(f"{x.shape[0]}\n")
        for v in x:
            fh.write(_fmt(v) + "\n")


def load_signal(path):
    with open(path) as fh:
        if fh.readline().strip() != "n":
            raise ValueError(f"{path}: not a signal file")
        n = int(fh.readline())
        x = np.array([float(line) for line in fh if line.strip()])
    if x.shape != (n,):
        raise ValueError(f"{path}: expected {n} entries, got {x.shape[0]}")
    return x
