"""Box-constrained genome encoding of block models.

A genome for ``B`` blocks holds ``B`` size weights followed by the upper
triangle (row-major, diagonal included) of the edge-weight matrix, all in
``[0, 1]``. Weights are mapped to a log scale and normalized, which
absorbs the two redundant degrees of freedom of this encoding.
"""

from __future__ import annotations

import numpy as np

from ..blockmodel import KAPPA_FLOOR, BlockModel


def genome_length(B: int) -> int:
    return B + B * (B + 1) // 2


def decode(genes, B: int, kappa: float, size_bounds=(-8.0, 0.0), edge_bounds=(-8.0, 0.0)):
    """Map a genome onto a block model with total mean degree ``kappa``.

    Returns ``None`` when any block mean degree falls below the floor.
    """
    genes = np.asarray(genes, dtype=float)
    if genes.size != genome_length(B):
        raise ValueError(f"genome for B={B} needs {genome_length(B)} genes, got {genes.size}")
    lo, hi = size_bounds
    w = 10.0 ** (lo + genes[:B] * (hi - lo))
    n = w / w.sum()
    lo, hi = edge_bounds
    v = 10.0 ** (lo + genes[B:] * (hi - lo))
    e = np.zeros((B, B))
    e[np.triu_indices(B)] = v
    e = e + np.triu(e, 1).T
    e *= kappa / e.sum()
    model = BlockModel(n, e)
    if np.any(model.block_degrees < KAPPA_FLOOR):
        return None
    return model
