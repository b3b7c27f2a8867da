# coding: utf-8

# # How much does the feed-forward gain matter?

# The helped variance is a quadratic in the gain g. Unit gain (1/sqrt 2) is
# what an ideal lossless setup wants; with losses the minimum moves lower.

import math

import numpy as np

from tripartite_cv import analysis as an

p = an.EXPERIMENT
g_opt = an.optimal_gain(p)
print(f"optimal gain {g_opt:.5f}")
print(f"variance at 1/sqrt2  {an.variance_vs_gain(p, 1 / math.sqrt(2)):.4f}")
print(f"variance at optimum  {an.variance_vs_gain(p, g_opt):.4f}")

# A coarse scan to see the shape of the curve

for g in np.linspace(0, 1.2, 7):
    print(f"g={g:.1f}  {an.variance_vs_gain(p, g):.4f}")

# As squeezing grows the optimal gain tends to a limit set by the two
# propagation efficiencies.

for r in (0.0, 0.674, 2.0, 5.0, 20.0):
    print(r, round(an.optimal_gain(an.ExperimentParams(r=r)), 5))
print("limit", p.xi1_sq / (math.sqrt(2) * p.xi2_sq))
