import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sbmrobust.moo import (
    dominates,
    hv_contribution,
    hv_contributions,
    hypervolume_2d,
    nondominated_mask,
    nondominated_ranks,
)


def grid_hypervolume(points, ref, cells=2000):
    """Brute force: count midpoints of a cells x cells grid covered by any box."""
    P = np.asarray(points)
    hi = P.max(axis=0)
    xs = ref[0] + (np.arange(cells) + 0.5) * (hi[0] - ref[0]) / cells
    ys = ref[1] + (np.arange(cells) + 0.5) * (hi[1] - ref[1]) / cells
    covered = np.zeros((cells, cells), dtype=bool)
    for p in P:
        covered |= (xs[:, None] <= p[0]) & (ys[None, :] <= p[1])
    return covered.mean() * (hi[0] - ref[0]) * (hi[1] - ref[1])


def test_dominates_examples():
    assert dominates((0.5, 0.5), (0.4, 0.5))
    assert not dominates((0.5, 0.4), (0.4, 0.5))
    assert not dominates((0.4, 0.5), (0.5, 0.4))
    assert not dominates((0.5, 0.5), (0.5, 0.5))


class TestHypervolume:
    def test_single(self):
        assert hypervolume_2d([(0.5, 0.5)], (0, 0)) == 0.25

    def test_two_points_exact(self):
        assert hypervolume_2d([(0.2, 0.8), (0.8, 0.2)], (0, 0)) == 0.28

    def test_two_points_brute_force(self):
        assert grid_hypervolume([(0.2, 0.8), (0.8, 0.2)], (0, 0)) == pytest.approx(0.28, abs=2e-3)

    def test_dominated_point_ignored(self):
        pts = [(0.2, 0.8), (0.8, 0.2)]
        assert hypervolume_2d(pts + [(0.1, 0.1)], (0, 0)) == hypervolume_2d(pts, (0, 0))

    def test_outside_reference_flagged(self):
        with pytest.warns(RuntimeWarning):
            hv, outside = hypervolume_2d([(0.5, 0.5), (-0.1, 0.9)], (0, 0), return_outside=True)
        assert hv == 0.25
        assert outside.tolist() == [False, True]

    def test_empty(self):
        assert hypervolume_2d(np.zeros((0, 2)), (0, 0)) == 0.0

    @given(st.integers(0, 2**32 - 1))
    def test_random_fronts_vs_grid(self, seed):
        rng = np.random.default_rng(seed)
        pts = rng.random((int(rng.integers(1, 11)), 2))
        ref = (-1e-3, -1e-3)
        assert abs(hypervolume_2d(pts, ref) - grid_hypervolume(pts, ref, 400)) < 1e-2


class TestContributions:
    def test_dominated_member(self):
        assert hv_contribution([(0.5, 0.5), (0.4, 0.4)], 1, (0, 0)) == 0.0

    def test_sole_member(self):
        assert hv_contribution([(0.5, 0.5)], 0, (0, 0)) == 0.25

    def test_pair(self):
        pts = [(0.2, 0.8), (0.8, 0.2)]
        assert hv_contribution(pts, 0, (0, 0)) == pytest.approx(0.12, abs=1e-15)
        assert hv_contribution(pts, 1, (0, 0)) == pytest.approx(0.12, abs=1e-15)

    @given(st.integers(0, 2**32 - 1))
    def test_closed_form_matches_definition(self, seed):
        rng = np.random.default_rng(seed)
        x = np.sort(rng.random(int(rng.integers(1, 12))))
        pts = np.column_stack([x, 1 - x**2])
        if rng.random() < 0.3:
            pts = np.vstack([pts, pts[:1]])  # exact duplicate
        ref = (-1e-3, -1e-3)
        fast = hv_contributions(pts, ref)
        slow = [hv_contribution(pts, i, ref) for i in range(len(pts))]
        np.testing.assert_allclose(fast, slow, atol=1e-12)

    def test_generic_fallback(self):
        pts = [(0.5, 0.5), (0.5, 0.4), (0.2, 0.9)]
        np.testing.assert_allclose(
            hv_contributions(pts, (0, 0)), [hv_contribution(pts, i, (0, 0)) for i in range(3)]
        )


class TestSorting:
    def test_ranks(self):
        pts = [(1, 0), (0, 1), (0.5, 0.5), (0.4, 0.4), (0.1, 0.1)]
        assert nondominated_ranks(pts).tolist() == [0, 0, 0, 1, 2]

    @given(st.integers(0, 2**32 - 1))
    def test_mask_is_rank_zero(self, seed):
        pts = np.random.default_rng(seed).integers(0, 5, size=(15, 2)).astype(float)
        ranks = nondominated_ranks(pts)
        np.testing.assert_array_equal(nondominated_mask(pts), ranks == 0)
        front = pts[ranks == 0]
        for a in front:
            assert not any(dominates(b, a) for b in front)
        # every point of rank k > 0 is dominated by some point of rank k - 1
        for i in np.flatnonzero(ranks > 0):
            assert any(dominates(pts[j], pts[i]) for j in np.flatnonzero(ranks == ranks[i] - 1))
