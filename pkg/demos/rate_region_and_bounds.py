# # Rate region and coalition-size bounds

# %%
from qnutility import (check_feasible, lemma1_transform, make_chain, max_scale,
                       prop3_upper_bound, prop4_lower_bound)
from qnutility.experiments import bounds_report, format_bounds_report

# %% [markdown]
# On a three-node chain the end-to-end rate tops out at q * f = 0.54.

# %%
net = make_chain(3, 0.6, 0.9)
print(max_scale(net, {(0, 2): 1.0}))
print(check_feasible(net, {(0, 2): 0.54}).feasible, check_feasible(net, {(0, 2): 0.55}).feasible)

# %% [markdown]
# Splitting some of a long-range pair back into its two halves never leaves
# the region: the middle node just skips those swaps.

# %%
net = make_chain(5, 0.6, 0.9)
t = max_scale(net, {(0, 4): 1.0})
R = lemma1_transform({(0, 4): t}, 0, 2, 4, 0.5 * t)
print(R, check_feasible(net, R).feasible)

# %%
print(prop3_upper_bound(0.01), prop4_lower_bound(20, 0.9, 2.0, 0.01))
print(format_bounds_report(bounds_report(20, 0.9, 2.0, 0.01)))
