"""A short front optimization and the structures along it.

The acceptance runs use 2e4 evaluations per seed; this walkthrough uses far
fewer so it finishes in well under a minute. Run with
``python demos/03_pareto_front.py``.
"""

import numpy as np

from sbmrobust import reduce
from sbmrobust.moo import OptConfig, sms_emoa_run


def progress(opt, snap):
    print(f"step {snap.step:5d}  evaluations {snap.evaluations:5d}  hypervolume {snap.hypervolume:.5f}")


config = OptConfig(B=3, kappa=2.5, population_size=30, max_evaluations=1500, seed=3, archive_interval=250)
result = sms_emoa_run(config, on_snapshot=progress)

# Walk along the final front from the random-failure end to the attack end
# and look at the reduced structure of each member.
print("\n R_targeted  R_random   B  block sizes / mean degrees")
for ind in result.front.members[:: max(1, len(result.front.members) // 8)]:
    model, _ = reduce(ind.model)
    order = np.argsort(-model.block_degrees)
    sizes = " ".join(f"{x:.2e}" for x in model.n[order])
    degrees = " ".join(f"{x:.3g}" for x in model.block_degrees[order])
    rt, rr = ind.objectives
    print(f" {rt:10.4f}  {rr:8.4f}  {model.B}  n=[{sizes}]  k=[{degrees}]")
