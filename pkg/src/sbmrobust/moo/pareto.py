"""Dominance, non-dominated sorting and exact two-objective hypervolume.

Both objectives are maximized throughout.
"""

from __future__ import annotations

import warnings

import numpy as np


def dominates(a, b) -> bool:
    """True if ``a`` is at least as good as ``b`` everywhere and differs from it."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return bool(np.all(a >= b) and np.any(a > b))


def dominance_matrix(points) -> np.ndarray:
    """``D[i, j]`` is True when point ``i`` dominates point ``j``."""
    P = np.asarray(points, dtype=float)
    ge = np.all(P[:, None, :] >= P[None, :, :], axis=2)
    gt = np.any(P[:, None, :] > P[None, :, :], axis=2)
    return ge & gt


def nondominated_ranks(points) -> np.ndarray:
    """Rank of every point; 0 is the non-dominated front."""
    D = dominance_matrix(points)
    n = D.shape[0]
    ranks = np.full(n, -1)
    remaining = np.ones(n, dtype=bool)
    rank = 0
    while remaining.any():
        dominated = D[remaining][:, remaining].any(axis=0)
        idx = np.flatnonzero(remaining)[~dominated]
        ranks[idx] = rank
        remaining[idx] = False
        rank += 1
    return ranks


def nondominated_mask(points) -> np.ndarray:
    P = np.asarray(points, dtype=float)
    if P.size == 0:
        return np.zeros(0, dtype=bool)
    return ~dominance_matrix(P).any(axis=0)


def hypervolume_2d(points, reference, return_outside=False):
    """Area dominated by ``points`` and bounded below by ``reference``.

    Sorts on the first objective and sweeps, O(n log n). Points that do not
    strictly dominate the reference add nothing; they trigger a
    ``RuntimeWarning`` and, with ``return_outside=True``, are reported as a
    boolean mask next to the area.
    """
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    ref = np.asarray(reference, dtype=float)
    inside = np.all(P > ref, axis=1)
    outside = ~inside
    if outside.any():
        warnings.warn(
            f"{int(outside.sum())} point(s) do not dominate the reference point",
            RuntimeWarning,
            stacklevel=2,
        )
    Q = P[inside]
    order = np.lexsort((-Q[:, 1], -Q[:, 0]))
    area = 0.0
    top = ref[1]
    for f1, f2 in Q[order]:
        if f2 > top:
            area += (f1 - ref[0]) * (f2 - top)
            top = f2
    if return_outside:
        return area, outside
    return area


def hv_contribution(points, index, reference) -> float:
    """Hypervolume lost when point ``index`` is removed."""
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    rest = np.delete(P, index, axis=0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        full = hypervolume_2d(P, reference)
        without = hypervolume_2d(rest, reference)
    return max(full - without, 0.0)


def hv_contributions(points, reference) -> np.ndarray:
    """Exclusive contribution of every point.

    Mutually non-dominated sets use the closed form of neighbouring
    rectangles; anything else falls back to :func:`hv_contribution`.
    """
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    ref = np.asarray(reference, dtype=float)
    n = len(P)
    if n == 0:
        return np.zeros(0)
    if not np.all(P > ref) or dominance_matrix(P).any():
        return np.array([hv_contribution(P, i, ref) for i in range(n)])
    # sorted by f1 descending, so f2 ascending; exact duplicates end up adjacent
    order = np.lexsort((-P[:, 1], -P[:, 0]))
    S = P[order]
    right = np.append(S[1:, 0], ref[0])
    below = np.insert(S[:-1, 1], 0, ref[1])
    contrib = np.empty(n)
    contrib[order] = (S[:, 0] - right) * (S[:, 1] - below)
    return contrib
