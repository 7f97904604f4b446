"""Checking the analytic curves against sampled finite networks.

Run with ``python demos/04_monte_carlo.py``.
"""

import numpy as np

from sbmrobust import BlockModel, giant_component, phi_for, s_curve
from sbmrobust.oracle import mc_giant, mc_robustness, sample_network

rng = np.random.default_rng(1)
model = BlockModel([0.3, 0.7], [[1.2, 0.3], [0.3, 1.4]])
print("block mean degrees:", model.block_degrees)

network = sample_network(model, 100_000, rng)
degrees = network.degrees()
for r in range(model.B):
    print(f"block {r}: {network.block_sizes[r]} nodes, realized mean degree {degrees[network.block_of == r].mean():.3f}")

print("\n schedule   q     analytic  sampled")
for schedule in ("random", "targeted"):
    for q in (0.0, 0.2, 0.4):
        exact = giant_component(model, phi_for(model, schedule, q))
        mean, se = mc_giant(network, schedule, q, rng, trials=3)
        print(f" {schedule:9s} {q:.1f}  {exact:.4f}    {mean:.4f} +- {se:.4f}")

mc = mc_robustness(model, "targeted", 20_000, 21, 3, rng)
print(f"\nR_targeted analytic {s_curve(model, 'targeted', 21).robustness:.4f}, sampled {mc.robustness:.4f} +- {mc.stderr:.4f}")
