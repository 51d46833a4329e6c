import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dscfnet.clustering import (
    EmptyInput,
    LengthMismatch,
    clustering_accuracy,
    kmeans,
    kmeans_fit,
    lloyd,
    pairwise_fscore,
)


def exhaustive_accuracy(pred, truth):
    """Best accuracy over every injective map from predicted to true ids."""
    p_ids, t_ids = np.unique(pred), np.unique(truth)
    pool = list(t_ids) + [None] * max(0, len(p_ids) - len(t_ids))
    best = 0
    for perm in itertools.permutations(pool, len(p_ids)):
        mapping = dict(zip(p_ids, perm))
        best = max(best, sum(mapping[p] == t for p, t in zip(pred, truth)))
    return best / len(pred)


def enumerated_fscore(pred, truth):
    tp = pp = tt = 0
    for i, j in itertools.combinations(range(len(pred)), 2):
        same_p, same_t = pred[i] == pred[j], truth[i] == truth[j]
        tp += same_p and same_t
        pp += same_p
        tt += same_t
    if tp == 0:
        return 0.0
    precision, recall = tp / pp, tp / tt
    return 2 * precision * recall / (precision + recall)


labels = st.integers(2, 12).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 4), min_size=n, max_size=n), st.lists(st.integers(0, 4), min_size=n, max_size=n))
)


class TestAccuracy:
    def test_identical(self):
        assert clustering_accuracy([0, 1, 2, 1], [0, 1, 2, 1]) == 1.0

    def test_renamed(self):
        assert clustering_accuracy([2, 0, 1, 0], [0, 1, 2, 1]) == 1.0

    def test_hand_example(self):
        assert clustering_accuracy([0, 1, 1, 1], [0, 0, 1, 1]) == 0.75

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            clustering_accuracy([0, 1], [0, 1, 1])

    @given(labels)
    def test_matches_exhaustive(self, pair):
        pred, truth = pair
        assert clustering_accuracy(pred, truth) == exhaustive_accuracy(pred, truth)

    @given(labels, st.permutations(range(5)))
    def test_permutation_invariant(self, pair, perm):
        pred, truth = pair
        renamed = [perm[p] for p in pred]
        assert clustering_accuracy(renamed, truth) == clustering_accuracy(pred, truth)
        assert pairwise_fscore(renamed, truth) == pairwise_fscore(pred, truth)


class TestFscore:
    def test_identical(self):
        assert pairwise_fscore([0, 0, 1, 1, 2], [0, 0, 1, 1, 2]) == 1.0

    def test_one_cluster(self):
        assert pairwise_fscore([0, 0, 0, 0], [0, 0, 1, 1]) == pytest.approx(0.5)

    def test_all_singletons(self):
        assert pairwise_fscore([0, 1, 2, 3], [0, 0, 1, 1]) == 0.0

    @settings(max_examples=200)
    @given(st.integers(2, 20).flatmap(lambda n: st.tuples(*(st.lists(st.integers(0, 5), min_size=n, max_size=n),) * 2)))
    def test_matches_enumeration(self, pair):
        pred, truth = pair
        assert pairwise_fscore(pred, truth) == pytest.approx(enumerated_fscore(pred, truth), abs=1e-12)


class TestKMeans:
    def test_single_cluster(self):
        pts = np.random.default_rng(0).random((2, 9))
        assert not kmeans(pts, 1).any()

    def test_each_point_own_cluster(self):
        pts = np.random.default_rng(1).random((3, 7))
        res = kmeans_fit(pts, 7)
        assert sorted(res.labels) == list(range(7)) and res.wcss == pytest.approx(0.0, abs=1e-20)

    def test_two_blobs(self):
        rng = np.random.default_rng(2)
        a = rng.normal(0.0, 0.1, size=(2, 20))
        b = rng.normal(0.0, 0.1, size=(2, 20)) + np.array([[10.0], [0.0]])
        lab = kmeans(np.hstack([a, b]), 2, seed=3)
        assert len(set(lab[:20])) == 1 and len(set(lab[20:])) == 1 and lab[0] != lab[20]

    def test_wcss_history_monotone(self):
        pts = np.random.default_rng(4).normal(size=(3, 60))
        for seed in range(10):
            _, _, history = lloyd(pts.T, 5, np.random.default_rng(seed))
            assert all(b <= a * (1 + 1e-12) for a, b in zip(history, history[1:]))

    def test_best_of_restarts(self):
        pts = np.random.default_rng(5).normal(size=(2, 80))
        res = kmeans_fit(pts, 6, restarts=8, seed=1)
        assert res.wcss == min(res.restart_wcss)

    def test_deterministic(self):
        pts = np.random.default_rng(6).random((4, 30))
        np.testing.assert_array_equal(kmeans(pts, 3, seed=11), kmeans(pts, 3, seed=11))

    def test_empty(self):
        with pytest.raises(EmptyInput):
            kmeans(np.zeros((3, 0)), 1)
