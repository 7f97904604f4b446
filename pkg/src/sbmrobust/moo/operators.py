"""Real-coded variation operators on the unit hypercube."""

from __future__ import annotations

import numpy as np


def sbx_crossover(p1, p2, eta: float, rng: np.random.Generator):
    """Simulated binary crossover, applied gene by gene.

    Each gene pair is spread symmetrically about the parents' mean by a
    factor drawn from the polynomial distribution with index ``eta``; the
    two children swap the gene with probability 1/2. Children are clipped
    to ``[0, 1]``.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if p1.shape != p2.shape:
        raise ValueError("parents must have equal length")
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    u = rng.random(p1.size)
    expo = 1.0 / (eta + 1.0)
    beta = np.where(u <= 0.5, (2.0 * u) ** expo, (1.0 / (2.0 * (1.0 - u))) ** expo)
    c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2)
    c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)
    swap = rng.random(p1.size) < 0.5
    c1[swap], c2[swap] = c2[swap], c1[swap]
    return np.clip(c1, 0.0, 1.0), np.clip(c2, 0.0, 1.0)


def polynomial_mutation(g, eta: float, per_gene_rate: float, rng: np.random.Generator):
    """Bounded polynomial mutation on ``[0, 1]``.

    Every gene mutates independently with probability ``per_gene_rate``.
    The perturbation law shrinks towards the nearer bound so results stay
    inside the box; they are clipped regardless.
    """
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    if not 0.0 <= per_gene_rate <= 1.0:
        raise ValueError(f"per_gene_rate must lie in [0, 1], got {per_gene_rate}")
    x = np.array(g, dtype=float)
    hit = rng.random(x.size) < per_gene_rate
    u = rng.random(x.size)
    if not hit.any():
        return x
    xs, us = x[hit], u[hit]
    expo = 1.0 / (eta + 1.0)
    lower = us < 0.5
    delta = np.empty_like(xs)
    val = 2.0 * us + (1.0 - 2.0 * us) * (1.0 - xs) ** (eta + 1.0)
    delta[lower] = val[lower] ** expo - 1.0
    val = 2.0 * (1.0 - us) + 2.0 * (us - 0.5) * xs ** (eta + 1.0)
    delta[~lower] = 1.0 - val[~lower] ** expo
    x[hit] = np.clip(xs + delta, 0.0, 1.0)
    return x
