"""Giant components and robustness of block-model ensembles.

Run with ``python demos/01_percolation.py``.
"""

import numpy as np

from sbmrobust import BlockModel, PhiVector, giant_component, robustness_pair, s_curve

# A single block is an Erdos-Renyi-like network whose degrees follow the
# zero-truncated Poisson law. No isolated nodes exist, which moves the
# percolation transition from <k> = 1 up to e / (e - 1).
print("mean degree   giant component")
for k in (1.3, 1.57, 1.6, 2.0, 2.5, 3.5):
    S = giant_component(BlockModel.single(k), PhiVector(np.ones(1), 0.0))
    print(f"{k:11.2f}   {S:.4f}")

# Robustness integrates the giant component over the removed fraction q.
# With a single block every node looks alike, so targeted and random
# removal coincide.
single = BlockModel.single(2.5)
print("\nsingle block, kappa = 2.5:  (R_targeted, R_random) =", robustness_pair(single))

# A small, very well connected core that holds the periphery together is
# excellent against random failures but collapses as soon as the hubs are
# attacked.
n_core = 2e-3
k_per = 1.25
ends_per = (1 - n_core) * k_per
e = np.array([[0.0, ends_per], [ends_per, 0.0]])
e[0, 0] = 2.5 - 2 * ends_per  # remaining half-edges stay inside the core
core_periphery = BlockModel([n_core, 1 - n_core], e)
print("core-periphery block degrees:", core_periphery.block_degrees)
print("core-periphery:  (R_targeted, R_random) =", robustness_pair(core_periphery))

curve = s_curve(core_periphery, "targeted")
print("\nS(q) under targeted removal, first few grid points:")
for q, S in list(zip(curve.q_grid, curve.s_values))[:6]:
    print(f"  q = {q:.3f}  S = {S:.4f}")
