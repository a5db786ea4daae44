#!/usr/bin/env python3
"""White noise before quantization, and the estimation bound it implies.

With noise xi_i ~ N(0, sigma^2) added to the quadratic measurement before
the comparison, each code becomes a Bernoulli observation whose success
probability depends on the signal.  That model has a Fisher information
matrix in closed form, hence an unbiased-estimator bound to compare the
solver against, expressed here on the SRER scale via trace(I^{-1}).
"""

import numpy as np

import bpr

n, oversampling, tau = 64, 20, 0.4550
x_true = bpr.gen_two_sinusoid_signal(n)  # deterministic two-tone test signal
ensemble = bpr.gen_gaussian_ensemble(n, oversampling * n, seed=31)
config = bpr.SolverConfig(max_iters=300)

print(" SNR_in (dB)   sigma      bound (dB)   achieved SRER (dB, 5-draw mean)")
for snr_db in (10.0, 20.0, 30.0):
    sigma = bpr.sigma_for_snr(ensemble, x_true, snr_db)
    fisher = bpr.fisher_information(ensemble, x_true, tau, sigma)
    bound = bpr.crb_srer(fisher, x_true)
    finals = []
    for r in range(5):
        codes = bpr.encode_binary(ensemble, x_true, tau, noise_sigma=sigma, seed=100 + r)
        trace = bpr.apgd_run(ensemble, codes, config, ground_truth=x_true)
        finals.append(trace.srer_db[-1])
    print(f"{snr_db:11.0f}   {sigma:7.4f}   {bound:10.2f}   {np.mean(finals):10.2f}")

print("""
Higher input SNR helps up to a point.  Because tau stays fixed, very low
noise saturates most comparisons (the code is then a deterministic
function of the ensemble) and only measurements within a few sigma of the
threshold still carry information; the bound itself degrades there.
Moderate noise acts like dithering for the 1-bit quantizer.
""")
