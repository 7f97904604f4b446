"""Ensemble entropy of block models and reduction to the minimal block set.

Only the partition-dependent part of the entropy per node is computed,

    s = -1/2 sum_rs e_rs ln(e_rs / (e_r e_s)),   e_r = sum_s e_rs,

which equals ``kappa/2 * (ln kappa - I)`` with ``I`` the mutual information of
the block labels at the two ends of a random edge. Coarsening the partition
cannot increase ``I``, so merging never lowers ``s``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np
from scipy.special import xlogy

from .blockmodel import BlockModel, InvalidModelError, merge_blocks

DEFAULT_EPSILON = 0.025
DROP_SIZE = 1e-8


@dataclass
class ReductionReport:
    original_B: int
    reduced_B: int
    epsilon: float
    merges: list = field(default_factory=list)
    dropped: list = field(default_factory=list)
    entropy_before: float = 0.0
    entropy_after: float = 0.0
    groups: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())

    @classmethod
    def from_json(cls, text: str) -> "ReductionReport":
        data = json.loads(text)
        data["merges"] = [(tuple(p), ds) for p, ds in data["merges"]]
        data["dropped"] = [tuple(d) for d in data["dropped"]]
        data["groups"] = [tuple(g) for g in data["groups"]]
        return cls(**data)


def entropy_density(model: BlockModel) -> float:
    """Partition-dependent ensemble entropy in nats per node."""
    e = model.e
    ends = model.edge_ends
    denom = np.outer(ends, ends)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(e > 0, e / denom, 1.0)
    return float(-0.5 * np.sum(xlogy(e, ratio)))


def merge_gain(model: BlockModel, a: int, b: int) -> float:
    """Entropy increase caused by merging blocks ``a`` and ``b``."""
    return entropy_density(merge_blocks(model, a, b)) - entropy_density(model)


def drop_blocks(model: BlockModel, blocks) -> BlockModel:
    """Delete ``blocks`` and renormalize so the rest keeps its relative structure."""
    keep = np.setdiff1d(np.arange(model.B), np.asarray(blocks, dtype=int))
    scale = model.n[keep].sum()
    return BlockModel(model.n[keep] / scale, model.e[np.ix_(keep, keep)] / scale)


def reduce(model: BlockModel, epsilon: float = DEFAULT_EPSILON):
    """Drop negligible blocks, then greedily merge equivalent ones.

    A block is negligible when both its size and its share of edge ends are
    below ``1e-8``. Afterwards the feasible pair with the smallest entropy
    gain is merged while that gain stays below ``epsilon``; ties go to the
    lowest index pair.

    Returns
    -------
    reduced : BlockModel
    report : ReductionReport
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    report = ReductionReport(model.B, model.B, float(epsilon))
    report.entropy_before = entropy_density(model)
    groups = [(r,) for r in range(model.B)]

    tiny = np.flatnonzero((model.n < DROP_SIZE) & (model.edge_ends < DROP_SIZE))
    if 0 < tiny.size < model.B:
        report.dropped = [(int(r), float(model.n[r])) for r in tiny]
        model = drop_blocks(model, tiny)
        groups = [g for r, g in enumerate(groups) if r not in set(tiny.tolist())]

    while model.B > 1:
        best = None
        for a, b in combinations(range(model.B), 2):
            try:
                gain = merge_gain(model, a, b)
            except InvalidModelError:
                continue
            if best is None or gain < best[0]:
                best = (gain, a, b)
        if best is None or best[0] >= epsilon:
            break
        gain, a, b = best
        model = merge_blocks(model, a, b)
        report.merges.append(((a, b), float(gain)))
        groups[a] = tuple(sorted(groups[a] + groups[b]))
        del groups[b]

    report.reduced_B = model.B
    report.entropy_after = entropy_density(model)
    report.groups = groups
    return model, report
