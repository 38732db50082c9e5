"""
Brute-force brackets around the LP
==================================

Grid search over lottery pairs gives a lower bound on the Pareto gap, grid
search over weights an upper bound on the minimum oscillation, and the LP
value sits in between. Exact rational solves remove the last rounding doubt.
"""

# %%
# One instance, several resolutions
# ---------------------------------
import numpy as np

from pareto_agg import GridSpec, brute_gap, brute_min_oscillation, exact_recheck, sandwich
from pareto_agg.instances import random_dyadic_problem

problem = random_dyadic_problem(np.random.default_rng(4), m=3, n=2)
print("v0 =", problem.dm, " individuals =", problem.matrix.tolist())
for k in (5, 10, 20, 40):
    print(f"k = {k:2d}: brute gap {brute_gap(problem, GridSpec(k=k)):.6f}")
for h in (0.2, 0.1, 0.05):
    spec = GridSpec(weight_box=2.0, step=h)
    print(f"h = {h:4.2f}: brute oscillation {brute_min_oscillation(problem, spec):.6f}")

# %%
# The full sandwich and the exact recheck
# ---------------------------------------
report = sandwich(problem, GridSpec(k=40, weight_box=2.0, step=0.05))
print(report.as_dict())
print(exact_recheck(problem, epsilon=0.5).as_dict())
