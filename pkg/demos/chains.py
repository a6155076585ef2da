# # Repeater chains
#
# How much quantum-volume throughput does a line of repeaters buy over
# running two-node circuits on each physical link? Links generate pairs at
# 0.6 per unit time and every swap succeeds with probability 0.9.

# %%
from qnutility import compute_utility, make_chain, max_active_coalition_size
from qnutility.experiments import SweepConfig, run_chain_sweep

# %% [markdown]
# Start small. With three nodes the end-to-end pair costs two link pairs
# and loses 10% in the swap, so the 8-volume circuit over all three nodes
# loses to two independent link circuits.

# %%
res = compute_utility(make_chain(3, 0.6, 0.9))
print(res.U_comp, res.active_tasks())

# %% [markdown]
# Sweep the chain length with perfect gates and with an effective gate error
# of 1%. The ratio column is utility over the no-swap baseline.

# %%
rows = run_chain_sweep(SweepConfig(nodes=range(2, 17), betas=(2.0,), eps=(0.0, 0.01)))
print(f"{'M':>3} {'eps':>5} {'ratio':>8} {'largest':>7}")
for r in rows:
    print(f"{r['M']:>3} {r['eps']:>5} {r['ratio']:>8.3f} {r['max_coalition']:>7}")

# %% [markdown]
# With errors nothing larger than 10 nodes ever runs, because a coalition of
# m nodes at depth d needs m*d <= 1/eps. Between 8 and 10 nodes every pair
# of nodes shares entanglement.

# %%
for M in (8, 10, 12):
    g = compute_utility(make_chain(M, 0.6, 0.9, 0.01)).entanglement
    print(M, "complete" if g.is_complete() else f"{len(g.support())} edges")

# %%
big = compute_utility(make_chain(16, 0.6, 0.9))
print("largest coalition, perfect gates, M=16:", max_active_coalition_size(big))
