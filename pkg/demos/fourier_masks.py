#!/usr/bin/env python3
"""Binary phase retrieval with Fourier sensing: masks make it work.

Structured illumination stacks k copies of the DFT, each seen through an
independent random 0/1 diagonal mask; the lifted forms become rank-2.
Without the masks the k blocks are identical copies of one DFT, the codes
carry no phase diversity, and recovery fails for any solver.
"""

import numpy as np

import bpr

n, k = 64, 20
x_true = bpr.gen_unit_sphere_signal(n, seed=21)
config = bpr.SolverConfig(max_iters=300)

print(f"n = {n}, k = {k} DFT blocks -> m = {k * n} complex rows\n")

for randomize, label in ((True, "random 0/1 masks"), (False, "plain oversampled DFT")):
    ensemble = bpr.gen_structured_illumination_ensemble(n, k, seed=22, randomize=randomize)
    # the measurement distribution is no longer chi^2_1: set tau at the
    # empirical median so the realized codes split as evenly as possible
    tau = bpr.empirical_median_threshold(ensemble, x_true)
    codes = bpr.encode_binary(ensemble, x_true, tau)
    trace = bpr.apgd_run(ensemble, codes, config, ground_truth=x_true)
    pseudo = bpr.centroid_decode(codes)
    baseline = bpr.phaselift_run(ensemble, pseudo, config, ground_truth=x_true)
    print(f"{label} (tau = {tau:.4f}):")
    print(f"  consistency solver: SRER {trace.srer_db[-1]:6.2f} dB, "
          f"consistency {trace.consistency[-1]:.4f}")
    print(f"  quadratic baseline: SRER {baseline.srer_db[-1]:6.2f} dB, "
          f"consistency {baseline.consistency[-1]:.4f}\n")

print("A rank-2 lifted form sanity check on one masked row (nonzero frequency):")
ens = bpr.gen_structured_illumination_ensemble(8, 1, seed=5, randomize=True)
A1 = ens.lifted_form(1)
print("eigenvalues of A_1:", np.round(np.linalg.eigvalsh(A1), 12))
