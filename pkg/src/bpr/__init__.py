"""Phase retrieval from binary-quantized quadratic measurements.

A signal is observed only through +-1 codes y_i = sign(|<a_i, x>|^2 - tau)
(optionally with pre-quantization noise).  This package provides the
lifted consistency solver, a centroid-decoded quadratic-loss baseline,
the Fisher-information estimation bound for the noisy model, evaluation
metrics, and a config-driven experiment harness with a CLI.
"""

from .baselines import (
    PseudoMeasurements,
    centroid_decode,
    phaselift_cost,
    phaselift_gradient,
    phaselift_run,
    phaselift_step,
)
from .crb import FisherMatrix, binary_log_likelihood, crb_srer, fisher_information, score
from .linalg import EigenPair, power_iteration, rank1_psd_project, trace_inner
from .measurement import (
    BinaryMeasurements,
    SensingEnsemble,
    chi1sq_quantile,
    empirical_median_threshold,
    encode_binary,
    gen_gaussian_ensemble,
    gen_structured_illumination_ensemble,
    gen_two_sinusoid_signal,
    gen_unit_sphere_signal,
    interval_centroids,
    sigma_for_snr,
)
from .metrics import MetricReport, consistency, psnr, srer, ssim
from .pgm import read_pgm, write_pgm
from .solver import (
    RunTrace,
    SolverConfig,
    apgd_run,
    bpr_cost,
    bpr_gradient,
    line_search,
    lipschitz_bound,
    one_sided_loss,
)

__version__ = "0.1.0"
