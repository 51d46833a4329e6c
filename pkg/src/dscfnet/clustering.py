"""K-means and the two external clustering metrics (AC, pairwise F-score).

Label vectors are 1-D integer arrays; points are stored columns-as-samples,
matching the ``r x N`` layout of a learned representation ``V``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment


class EmptyInput(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


@dataclass
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    wcss: float
    restart_wcss: list
    history: list  # WCSS after every assignment step of the winning restart


def _kmeans_pp(P, K, rng):
    """k-means++ seeding on row-sample matrix ``P`` (N x d)."""
    N = P.shape[0]
    centers = np.empty((K, P.shape[1]))
    centers[0] = P[rng.integers(N)]
    d2 = np.sum((P - centers[0]) ** 2, axis=1)
    for k in range(1, K):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(N, p=d2 / total)
        else:
            idx = rng.integers(N)
        centers[k] = P[idx]
        d2 = np.minimum(d2, np.sum((P - centers[k]) ** 2, axis=1))
    return centers


def _sq_dists(P, centers):
    d = (
        np.sum(P**2, axis=1)[:, None]
        - 2.0 * P @ centers.T
        + np.sum(centers**2, axis=1)[None, :]
    )
    return np.maximum(d, 0.0)


def lloyd(P, K, rng, max_iter=300, tol=1e-6):
    """One Lloyd run from k-means++ seeds on row samples ``P``.

    Returns ``(labels, centers, history)``; ``history`` is the WCSS after
    each assignment step and never increases.
    """
    centers = _kmeans_pp(P, K, rng)
    history = []
    labels = None
    for _ in range(max_iter):
        d = _sq_dists(P, centers)
        labels = np.argmin(d, axis=1)
        # exact WCSS for the current (labels, centers) pair
        history.append(float(np.sum((P - centers[labels]) ** 2)))
        new_centers = centers.copy()
        counts = np.bincount(labels, minlength=K)
        for k in range(K):
            if counts[k]:
                new_centers[k] = P[labels == k].mean(axis=0)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            # reseed empty clusters at the worst-fit points
            cost = np.sum((P - new_centers[labels]) ** 2, axis=1)
            far = np.argsort(-cost, kind="stable")[: empty.size]
            new_centers[empty] = P[far]
        shift = np.max(np.sqrt(np.sum((new_centers - centers) ** 2, axis=1)))
        centers = new_centers
        if shift <= tol and not empty.size:
            break
    labels = np.argmin(_sq_dists(P, centers), axis=1)
    final = float(np.sum((P - centers[labels]) ** 2))
    if final <= history[-1]:
        history.append(final)
    return labels, centers, history


def kmeans_fit(points, K, restarts=10, seed=0, max_iter=300, tol=1e-6):
    """Best-of-``restarts`` Lloyd's algorithm on the columns of ``points``."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] == 0:
        raise EmptyInput("no samples to cluster")
    if not np.all(np.isfinite(points)):
        raise ValueError("points contain non-finite entries")
    P = points.T
    N = P.shape[0]
    if not 1 <= K <= N:
        raise ValueError(f"K must be in [1, {N}], got {K}")
    rng = np.random.default_rng(seed)
    best = None
    restart_wcss = []
    for _ in range(max(1, restarts)):
        labels, centers, history = lloyd(P, K, rng, max_iter=max_iter, tol=tol)
        w = history[-1]
        restart_wcss.append(w)
        if best is None or w < best.wcss:
            best = KMeansResult(labels, centers.T, w, restart_wcss, history)
    return best


def kmeans(points, K, restarts=10, seed=0):
    """Cluster the columns of ``points``; returns integer labels in ``[0, K)``."""
    return kmeans_fit(points, K, restarts=restarts, seed=seed).labels


def _check_pair(pred, truth):
    pred = np.asarray(pred).astype(int).ravel()
    truth = np.asarray(truth).astype(int).ravel()
    if pred.shape != truth.shape:
        raise LengthMismatch(f"{pred.size} predicted vs {truth.size} true labels")
    return pred, truth


def contingency(pred, truth):
    pred, truth = _check_pair(pred, truth)
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    C = np.zeros((p.max(initial=-1) + 1, t.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(C, (p, t), 1)
    return C


def clustering_accuracy(pred, truth):
    """Fraction of samples matched under the best one-to-one label mapping."""
    pred, truth = _check_pair(pred, truth)
    if pred.size == 0:
        raise EmptyInput("no labels")
    C = contingency(pred, truth)
    rows, cols = linear_sum_assignment(C, maximize=True)
    return float(C[rows, cols].sum() / pred.size)


def pairwise_fscore(pred, truth):
    """F-measure of same-cluster decisions over all unordered sample pairs.

    Returns 0 when no pair is predicted (or truly) co-clustered.
    """
    pred, truth = _check_pair(pred, truth)
    if pred.size < 2:
        raise ValueError("need at least two samples")
    C = contingency(pred, truth)

    def pairs(n):
        return np.sum(n * (n - 1)) // 2

    both = pairs(C)
    pred_same = pairs(C.sum(axis=1))
    true_same = pairs(C.sum(axis=0))
    if pred_same == 0 or true_same == 0 or both == 0:
        return 0.0
    precision = both / pred_same
    recall = both / true_same
    return float(2 * precision * recall / (precision + recall))
