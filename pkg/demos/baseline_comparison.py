#!/usr/bin/env python3
"""Consistency solver vs a quadratic-loss lifting baseline on the same codes.

A squared-distance cost cannot digest +-1 symbols directly, so the codes
are re-encoded first: -1 becomes the mean of chi^2_1 on [0, tau], +1 the
mean on [tau, inf).  Both solvers then share the same rank-1 projection
and momentum schedule; only the loss and the step rule differ.
"""

import numpy as np

import bpr

n, oversampling, tau = 64, 20, 0.4550

x_true = bpr.gen_unit_sphere_signal(n, seed=17)
ensemble = bpr.gen_gaussian_ensemble(n, oversampling * n, seed=18)
codes = bpr.encode_binary(ensemble, x_true, tau)

c_low, c_high = bpr.interval_centroids(tau)
print(f"centroid decoding: -1 -> {c_low:.4f}, +1 -> {c_high:.4f}")

config = bpr.SolverConfig(max_iters=300)
consistency_trace = bpr.apgd_run(ensemble, codes, config, ground_truth=x_true)
pseudo = bpr.centroid_decode(codes)
baseline_trace = bpr.phaselift_run(ensemble, pseudo, config, ground_truth=x_true)

print("\n iter   consistency-solver SRER   baseline SRER")
for i in (0, 4, 9, 24, 49, 99, 299):
    print(f"{i + 1:5d}   {consistency_trace.srer_db[i]:23.2f}"
          f"   {baseline_trace.srer_db[i]:13.2f}")

print(f"""
The baseline converges in a handful of exact closed-form steps but
plateaus: its targets are the two interval centroids, so the fitted
rank-1 matrix is scale-shrunk toward the average code.  The consistency
cost only asks each measurement to land on the correct side of tau and
keeps improving.

final SRER:        {consistency_trace.srer_db[-1]:6.2f} dB vs {baseline_trace.srer_db[-1]:6.2f} dB
final consistency: {consistency_trace.consistency[-1]:6.4f} vs {baseline_trace.consistency[-1]:6.4f}
""")
