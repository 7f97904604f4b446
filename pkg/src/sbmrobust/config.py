"""Run configuration file: one flat JSON mapping per run.

Keys
----
mode
    ``"moo"`` (two-objective front) or ``"constrained"`` (``R_random`` at
    fixed ``R_targeted``).
B, kappa, population_size, max_evaluations, seed, eta_crossover,
eta_mutation, p_crossover, p_mutation, reference, grid_size, size_bounds,
edge_bounds, archive_interval
    Optimizer settings, see :class:`sbmrobust.moo.OptConfig`.
target, tolerance, penalty
    Constrained mode only.
epsilon
    Entropy threshold used when reducing front members for reports.
nodes, trials
    Monte-Carlo validation sizes.
out
    Output directory; runs land in ``<out>/<seed>/``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

from .entropy import DEFAULT_EPSILON
from .moo import OptConfig

_OWN = ("mode", "target", "tolerance", "penalty", "epsilon", "nodes", "trials", "out")


@dataclass
class RunConfig:
    optimizer: OptConfig
    mode: str = "moo"
    target: float | None = None
    tolerance: float = 0.005
    penalty: float = 10.0
    epsilon: float = DEFAULT_EPSILON
    nodes: int = 100_000
    trials: int = 5
    out: str = "run"

    def __post_init__(self):
        if self.mode not in ("moo", "constrained"):
            raise ValueError(f"mode must be 'moo' or 'constrained', got {self.mode!r}")
        if self.mode == "constrained" and self.target is None:
            raise ValueError("constrained mode needs a 'target'")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    def to_dict(self) -> dict:
        d = self.optimizer.to_dict()
        d.update({k: getattr(self, k) for k in _OWN})
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        opt_keys = {f.name for f in fields(OptConfig)}
        unknown = set(data) - opt_keys - set(_OWN)
        if unknown:
            raise ValueError(f"unknown configuration keys: {sorted(unknown)}")
        opt = OptConfig.from_dict({k: v for k, v in data.items() if k in opt_keys})
        return cls(opt, **{k: v for k, v in data.items() if k in _OWN})

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("configuration must be a JSON mapping")
        return cls.from_dict(data)

    def write(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def read(cls, path) -> "RunConfig":
        return cls.loads(Path(path).read_text())
