"""Pinning R_targeted and maximizing R_random.

A constrained single-objective run at R_targeted = 0 recovers the
core-periphery extreme: a tiny core of very high degree holding together a
periphery whose mean degree sits near kappa / 2. Run with
``python demos/05_constrained_endpoint.py`` (about half a minute).
"""

from sbmrobust import reduce
from sbmrobust.moo import OptConfig, constrained_run

config = OptConfig(B=2, kappa=2.5, population_size=50, max_evaluations=5000, seed=1)
result = constrained_run(config, 0.0, tolerance=0.005)
rt, rr = result.individual.objectives
print(f"found={result.found}  R_targeted={rt:.4f}  R_random={rr:.4f}")

model, _ = reduce(result.individual.model)
for r in range(model.B):
    print(f"block {r}: n = {model.n[r]:.3e}, mean degree = {model.block_degrees[r]:.4g}")
