"""Finite-size Monte-Carlo check of the analytic percolation results.

Networks are realized by stub matching: block-``r`` nodes draw degrees from
the zero-truncated Poisson law, each half-edge picks a target block from
the mixing matrix and half-edges are paired uniformly inside every
``(r, s)`` bucket. Unmatched surplus stubs are discarded, then self-loops
and multi-edges are removed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .blockmodel import BlockModel, check, mixing_matrix, modified_poisson_pmf
from .percolation import RemovalSchedule, phi_for, s_curve


@dataclass
class SampledNetwork:
    model: BlockModel
    N: int
    block_of: np.ndarray
    edges: np.ndarray
    discarded: dict = field(default_factory=dict)

    @property
    def block_sizes(self) -> np.ndarray:
        return np.bincount(self.block_of, minlength=self.model.B)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.N)


def apportion(total: int, weights) -> np.ndarray:
    """Split ``total`` into integers proportional to ``weights`` (largest remainder)."""
    w = np.asarray(weights, dtype=float)
    ideal = total * w / w.sum()
    base = np.floor(ideal).astype(int)
    short = total - base.sum()
    if short > 0:
        order = np.argsort(-(ideal - base), kind="stable")
        base[order[:short]] += 1
    return base


def sample_degrees(c: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Zero-truncated Poisson degrees by inverse-CDF lookup."""
    kmax = int(np.ceil(c + 12.0 * np.sqrt(c) + 30.0))
    k = np.arange(1, kmax + 1)
    cdf = np.cumsum(modified_poisson_pmf(c, k))
    cdf /= cdf[-1]
    return k[np.searchsorted(cdf, rng.random(size), side="right").clip(max=kmax - 1)]


def sample_network(model: BlockModel, N: int, rng: np.random.Generator) -> SampledNetwork:
    """Realize ``model`` as a simple graph on ``N`` nodes."""
    check(model)
    if N < 1000:
        raise ValueError(f"N must be at least 1000, got {N}")
    B = model.B
    sizes = apportion(N, model.n)
    block_of = np.repeat(np.arange(B), sizes)
    starts = np.concatenate([[0], np.cumsum(sizes)])
    m = mixing_matrix(model)
    c = model.poisson_params

    # buckets[r][s]: stub owners in block r whose half-edge targets block s
    buckets = [[None] * B for _ in range(B)]
    for r in range(B):
        deg = sample_degrees(c[r], sizes[r], rng)
        owners = np.repeat(np.arange(starts[r], starts[r + 1]), deg)
        cum = np.cumsum(m[r])
        target = np.searchsorted(cum / cum[-1], rng.random(owners.size), side="right")
        target = np.minimum(target, B - 1)
        for s in range(B):
            buckets[r][s] = owners[target == s]

    parts = []
    discarded = {}
    for r in range(B):
        stubs = rng.permutation(buckets[r][r])
        k = stubs.size // 2
        parts.append(np.column_stack([stubs[: 2 * k : 2], stubs[1 : 2 * k : 2]]))
        discarded[(r, r)] = int(stubs.size - 2 * k)
        for s in range(r + 1, B):
            a = rng.permutation(buckets[r][s])
            b = rng.permutation(buckets[s][r])
            k = min(a.size, b.size)
            parts.append(np.column_stack([a[:k], b[:k]]))
            discarded[(r, s)] = int(max(a.size, b.size) - k)
    edges = np.concatenate(parts) if parts else np.zeros((0, 2), dtype=int)
    edges = edges[edges[:, 0] != edges[:, 1]]
    edges = np.unique(np.sort(edges, axis=1), axis=0)
    return SampledNetwork(model, N, block_of, edges, discarded)


def largest_component(N: int, edges: np.ndarray, alive: np.ndarray) -> int:
    """Size of the largest connected component among ``alive`` nodes."""
    if not alive.any():
        return 0
    keep = alive[edges[:, 0]] & alive[edges[:, 1]]
    e = edges[keep]
    graph = coo_matrix((np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(N, N))
    _, labels = connected_components(graph, directed=False)
    counts = np.bincount(labels[alive])
    return int(counts.max())


def removal_counts(network: SampledNetwork, phi, q: float) -> np.ndarray:
    """Nodes to delete per block; totals ``round(q N)`` split by ``1 - phi``."""
    sizes = network.block_sizes
    total = int(round(q * network.N))
    weights = (1.0 - np.asarray(phi)) * sizes
    if total == 0 or weights.sum() <= 0:
        return np.zeros_like(sizes)
    counts = apportion(total, weights)
    # a block cannot lose more nodes than it has; push overflow onto the others
    while np.any(counts > sizes):
        over = np.maximum(counts - sizes, 0).sum()
        counts = np.minimum(counts, sizes)
        room = sizes - counts
        counts += apportion(over, room) if room.sum() else 0
    return counts


def mc_giant(network: SampledNetwork, schedule, q: float, rng: np.random.Generator, trials: int = 1):
    """Mean largest-component fraction after blockwise removal, with its standard error.

    Survival fractions per block come from :func:`phi_for`; within a block
    the removed nodes are chosen uniformly.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    phi = phi_for(network.model, schedule, q).phi
    counts = removal_counts(network, phi, q)
    starts = np.concatenate([[0], np.cumsum(network.block_sizes)])
    values = np.empty(trials)
    for t in range(trials):
        alive = np.ones(network.N, dtype=bool)
        for r, k in enumerate(counts):
            if k:
                alive[rng.choice(np.arange(starts[r], starts[r + 1]), size=k, replace=False)] = False
        values[t] = largest_component(network.N, network.edges, alive) / network.N
    se = values.std(ddof=1) / np.sqrt(trials) if trials > 1 else 0.0
    return float(values.mean()), float(se)


def simpson_weights(grid_size: int) -> np.ndarray:
    w = np.ones(grid_size)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / (3.0 * (grid_size - 1))


@dataclass
class MCRobustness:
    q_grid: np.ndarray
    s_mean: np.ndarray
    s_stderr: np.ndarray
    robustness: float
    stderr: float


def mc_robustness(model: BlockModel, schedule, N: int, grid_size: int, trials: int, rng) -> MCRobustness:
    """Robustness estimated from ``trials`` independently sampled networks.

    Each trial samples a fresh network from its own generator stream and
    removes nodes at every grid point; ``R`` is twice the Simpson integral
    of the mean curve and its error is propagated from the pointwise
    standard errors.
    """
    if grid_size < 3 or grid_size % 2 == 0:
        raise ValueError("grid_size must be odd and >= 3")
    schedule = RemovalSchedule.parse(schedule)
    q_grid = np.linspace(0.0, 1.0, grid_size)
    samples = np.empty((trials, grid_size))
    for t, stream in enumerate(rng.spawn(trials)):
        net = sample_network(model, N, stream)
        for i, q in enumerate(q_grid):
            samples[t, i] = mc_giant(net, schedule, q, stream, 1)[0]
    mean = samples.mean(axis=0)
    se = samples.std(axis=0, ddof=1) / np.sqrt(trials) if trials > 1 else np.zeros(grid_size)
    R = 2.0 * float(simpson(mean, x=q_grid))
    err = 2.0 * float(np.sqrt(np.sum((simpson_weights(grid_size) * se) ** 2)))
    return MCRobustness(q_grid, mean, se, R, err)


def validation_report(model: BlockModel, schedule, N: int, grid_size: int, trials: int, rng, path=None):
    """Analytic and Monte-Carlo curves side by side; optionally written as CSV."""
    mc = mc_robustness(model, schedule, N, grid_size, trials, rng)
    exact = s_curve(model, schedule, grid_size)
    rows = list(zip(mc.q_grid, exact.s_values, mc.s_mean, mc.s_stderr))
    if path is not None:
        with open(path, "w") as fh:
            fh.write("q,S_analytic,S_mc,stderr\n")
            for q, sa, sm, se in rows:
                fh.write(f"{q!r},{sa!r},{sm!r},{se!r}\n")
            fh.write(f"R,{exact.robustness!r},{mc.robustness!r},{mc.stderr!r}\n")
    return exact, mc
