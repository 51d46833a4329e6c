"""Reference factorizations: single-layer CF and the naive cascade.

Concept factorization approximates ``X ~ X W V`` with nonnegative ``W``
(``N x r``) and ``V`` (``r x N``). With the kernel ``K = X.T @ X`` the
standard multiplicative updates are

    W <- W * (K V.T) / (K W V V.T)
    V <- V * (W.T K) / (W.T K W V)

Both ratios only involve ``K``, which is entrywise nonnegative for
nonnegative data, and the objective ``||X - X W V||_F^2`` is non-increasing
under them.
"""

import math
from dataclasses import dataclass

import numpy as np

from .model import Diverged
from .numerics import EPS_DIV, as_matrix, gram, safe_div


@dataclass(frozen=True)
class CfConfig:
    rank: int
    max_iters: int = 500
    tol: float = 1e-6
    seed: int = 0
    eps_div: float = EPS_DIV


@dataclass
class CfResult:
    W: np.ndarray
    V: np.ndarray
    objectives: list
    converged: bool

    def __iter__(self):
        # allows ``W, V = cf_train(...)``
        return iter((self.W, self.V))


def cf_objective(X, W, V):
    """``||X - X W V||_F^2``."""
    return float(np.sum(np.square(X - (X @ W) @ V)))


def cf_train(X, config, W0=None, V0=None):
    """Fit single-layer concept factorization.

    Iterates until the relative objective decrease falls below
    ``config.tol`` or ``config.max_iters`` is reached. ``W0``/``V0``
    override the seeded uniform (0, 1] initialization.

    Returns
    -------
    CfResult
        Unpacks as ``(W, V)``; ``objectives[0]`` is the initial objective.
    """
    X = as_matrix(X, "X")
    if np.any(X < 0):
        raise ValueError("X must be entrywise nonnegative")
    N = X.shape[1]
    r = config.rank
    if not 1 <= r <= N:
        raise ValueError(f"rank must be in [1, {N}], got {r}")
    rng = np.random.default_rng(config.seed)
    W = 1.0 - rng.random((N, r)) if W0 is None else np.array(W0, dtype=float)
    V = 1.0 - rng.random((r, N)) if V0 is None else np.array(V0, dtype=float)
    K = gram(X)
    obj = cf_objective(X, W, V)
    objectives = [obj]
    converged = False
    for _ in range(config.max_iters):
        VVt = V @ V.T
        W = W * safe_div(K @ V.T, K @ W @ VVt, config.eps_div)
        WtK = W.T @ K
        V = V * safe_div(WtK, (WtK @ W) @ V, config.eps_div)
        new = cf_objective(X, W, V)
        if not math.isfinite(new):
            raise Diverged("non-finite CF objective")
        objectives.append(new)
        if obj - new <= config.tol * max(obj, np.finfo(float).tiny):
            converged = True
            break
        obj = new
    return CfResult(W=W, V=V, objectives=objectives, converged=converged)


def cascade_cf_train(X, layer_ranks, per_layer):
    """Multilayer CF where each layer factorizes the previous layer's ``V``.

    ``per_layer.rank`` is ignored; layer ``l`` uses ``layer_ranks[l]`` and
    the same seed. Returns the last ``V`` and the per-layer results.
    """
    if len(layer_ranks) == 0:
        raise ValueError("layer_ranks must be non-empty")
    data = X
    results = []
    for r in layer_ranks:
        cfg = CfConfig(
            rank=int(r),
            max_iters=per_layer.max_iters,
            tol=per_layer.tol,
            seed=per_layer.seed,
            eps_div=per_layer.eps_div,
        )
        res = cf_train(data, cfg)
        results.append(res)
        data = res.V
    return data, results
