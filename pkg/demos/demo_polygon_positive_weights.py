"""
Strictly positive weights on an inscribed polygon
=================================================

On the full quarter disc, a DM with utility ``-x1`` and an individual with
utility ``x2`` admit no aggregation with a strictly positive weight at
``epsilon = 1``. Replacing the disc by an inscribed polygon restores a
positive margin ``tan(theta1 / 2)``, which shrinks as the polygon refines.
"""

# %%
# Margins for finer and finer polygons
# ------------------------------------
import math

from pareto_agg import check_strong, positive_weight_margin
from pareto_agg.instances import quarter_disc_polygon

for d in (4, 8, 16, 32, 64):
    theta = math.pi / d
    problem, vertices = quarter_disc_polygon(theta)
    margin = positive_weight_margin(problem, 1.0)
    strong = check_strong(problem, 1.0)
    print(f"theta1 = pi/{d:<3d} vertices {len(vertices):3d}  mu* = {margin.mu_star:.8f}  "
          f"tan(theta1/2) = {math.tan(theta / 2):.8f}  strong: {strong.holds}")

# %%
# Why the weight is capped
# ------------------------
# The residual ``-x1 - a x2`` has oscillation ``max_j cos(phi_j) + a sin(phi_j)``
# over the arc vertices. The first arc vertex binds: ``cos(theta1) + a sin(theta1) <= 1``
# exactly when ``a <= tan(theta1 / 2)``. On the disc itself every ``a > 0`` pushes
# the maximum to ``sqrt(1 + a^2) > 1``.
problem, _ = quarter_disc_polygon(math.pi / 8)
margin = positive_weight_margin(problem, 1.0)
print("weights achieving the margin:", margin.weights.a, " intercept:", margin.weights.b)
