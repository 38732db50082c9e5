"""
Pooling tastes and beliefs
==========================

Two individuals with linearly independent tastes and beliefs. The DM's
taste and prior are both 50/50 mixtures, so both decompositions are exact.
A second profile then shows how the event-wise likelihood floor relates to
the pooled total variation on a finite state space.
"""

# %%
# An exact decomposition
# ----------------------
from pareto_agg import belief_pool, likelihood_floor_check, taste_decompose
from pareto_agg.instances import mixture_seu
from pareto_agg.seu import floor_level, relaxed_floor_level

seu = mixture_seu(0.125)
taste = taste_decompose(seu, 0.0, exact=True)
lam, resid = belief_pool(seu.P0, seu.Ps, exact=True)
print("taste weights:", taste.weights.a, " oscillation:", taste.oscillation)
print("belief weights:", [str(x) for x in lam], " tv_norm:", resid.tv_norm)
print(likelihood_floor_check(seu.P0, seu.Ps, 0.0).as_dict(seu.states))

# %%
# Crisp events versus fuzzy events
# --------------------------------
# The floor compares ``P0(E)`` with ``min_i P_i(E)`` on every event. The best
# linear pool instead answers the same question over fuzzy events
# ``q in [0, 1]^S``, and on a finite state space that can be strictly harder.
P0 = [1 / 3, 1 / 3, 1 / 3]
Ps = [[2 / 3, 0, 1 / 3], [0, 1 / 3, 2 / 3]]
check = likelihood_floor_check(P0, Ps, 0.0)
lam, resid = belief_pool(P0, Ps)
print("floor holds at eps2 = 0:", check.holds, " crisp level:", floor_level(P0, Ps))
print("best pool:", lam, " tv_norm:", round(resid.tv_norm, 6))
print("fuzzy level:", round(relaxed_floor_level(P0, Ps), 6), "= tv_norm / 2")
