#!/usr/bin/env python3
"""What the momentum factor buys over plain projected descent.

Plain PGD provably never increases the one-sided cost when the step stays
below 1/C0, with C0 = sum_i Tr(A_i)^2.  The momentum schedule forfeits
that guarantee (the rank-1 set is not convex) yet converges much faster
in practice.  Both variants share the grid line search and the power-
iteration rank-1 projection.
"""

import numpy as np

import bpr

n, oversampling, tau = 64, 20, 0.4550
x_true = bpr.gen_unit_sphere_signal(n, seed=41)
ensemble = bpr.gen_gaussian_ensemble(n, oversampling * n, seed=42)
codes = bpr.encode_binary(ensemble, x_true, tau)

c0 = bpr.lipschitz_bound(ensemble)
print(f"gradient Lipschitz bound C0 = {c0:.4g}, safe fixed step 1/C0 = {1 / c0:.3g}\n")

momentum = bpr.apgd_run(ensemble, codes, bpr.SolverConfig(max_iters=300), ground_truth=x_true)
plain = bpr.apgd_run(ensemble, codes, bpr.SolverConfig(max_iters=300, momentum=False),
                     ground_truth=x_true)

print(" iter    cost (momentum)    cost (plain)    SRER momentum / plain (dB)")
for i in (0, 9, 24, 49, 74, 149, 299):
    print(f"{i + 1:5d}   {momentum.cost[i]:15.6g}   {plain.cost[i]:13.6g}"
          f"   {momentum.srer_db[i]:9.2f} / {plain.srer_db[i]:.2f}")

# the safe-step variant really is monotone, just slow
fixed = bpr.apgd_run(ensemble, codes,
                     bpr.SolverConfig(max_iters=300, momentum=False, fixed_step=1 / c0))
print(f"\nfixed-step PGD: monotone descent holds "
      f"({np.all(np.diff(fixed.cost) <= 1e-12)}), "
      f"but after 300 iterations the cost is still {fixed.cost[-1]:.4g}")
