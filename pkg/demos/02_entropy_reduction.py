"""Reducing block models to their essential blocks.

Run with ``python demos/02_entropy_reduction.py``.
"""

import numpy as np

from sbmrobust import BlockModel, entropy_density, merge_gain, reduce

# Splitting one random block into two halves with proportional mixing adds
# no information: the merge costs no entropy and reduce undoes it.
split = BlockModel([0.5, 0.5], np.full((2, 2), 2.5 / 4))
print("proportional split: merge gain =", merge_gain(split, 0, 1))
reduced, report = reduce(split)
print("  reduced to B =", reduced.B, "with e =", reduced.e.tolist())

# A bipartite pair is genuine structure. Merging it would cost
# (kappa / 2) ln 2 nats per node, far above the default threshold.
bipartite = BlockModel([0.5, 0.5], [[0.0, 1.25], [1.25, 0.0]])
print("\nbipartite: s =", entropy_density(bipartite), " merge gain =", merge_gain(bipartite, 0, 1))
print("  reduce keeps B =", reduce(bipartite)[0].B)

# A three-block model made of a core-periphery pair plus a duplicated
# periphery. The duplicate is merged, the core survives.
n = np.array([1e-3, 0.4995, 0.4995])
e = np.array(
    [
        [0.0, 0.6, 0.6],
        [0.6, 0.03, 0.03],
        [0.6, 0.03, 0.03],
    ]
)
e *= 2.5 / e.sum()
model = BlockModel(n, e)
reduced, report = reduce(model)
print("\nthree-block model reduces to B =", reduced.B)
print(report.to_json())
