"""Layer-wise deep self-representative concept factorization.

The model factorizes the recovered data ``Xc = X - E`` as

    Xc ~ Xc @ W_1 @ ... @ W_L @ V

with nonnegative ``W_l`` (``r_{l-1} x r_l``, ``r_0 = N``) and ``V`` (``r_L x N``),
a column-sparse error ``E`` penalized by its L2,1 norm, and an auxiliary
similarity ``S`` that ties the coefficient matrix ``R = W_1 ... W_L V`` to the
self-expression of ``V``. Layers are trained one after another: while layer
``l`` is optimized, the prefix ``W_1 ... W_{l-1}`` is frozen.

Mixed-sign matrices (the kernel ``Xc.T @ Xc``, ``S`` and
``Q = (I - S)(I - S).T``) are split into positive and negative parts before
they enter a multiplicative ratio, so ``W_l`` and ``V`` never leave the
nonnegative orthant.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import (
    EPS_DIV,
    ShapeMismatch,
    as_matrix,
    column_l2_norms,
    gram,
    l21_norm,
    pos_neg_split,
    safe_div,
    solve_spd,
)

logger = logging.getLogger(__name__)


class BadShape(ValueError):
    pass


class Diverged(FloatingPointError):
    pass


@dataclass(frozen=True)
class ModelConfig:
    """Hyperparameters of one training run.

    ``alpha`` weighs the locality terms, ``beta`` the self-expression of
    ``V`` and ``gamma`` the L2,1 penalty on the error matrix. Each layer runs
    until ``||V_{t+1} - V_t||_F <= epsilon`` or ``max_iters`` iterations.
    """

    layer_dims: tuple
    alpha: float = 1e4
    beta: float = 1e4
    gamma: float = 1e4
    epsilon: float = 1e-3
    max_iters: int = 500
    seed: int = 0
    delta: float = 1e-8
    eps_div: float = EPS_DIV
    warm_start: bool = False

    def __post_init__(self):
        dims = tuple(int(r) for r in np.atleast_1d(self.layer_dims))
        object.__setattr__(self, "layer_dims", dims)
        if not dims or min(dims) < 1:
            raise ValueError("layer_dims must be a non-empty list of positive ints")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be nonnegative")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")
        if not (self.delta > 0 and self.eps_div >= 0):
            raise ValueError("delta must be positive and eps_div nonnegative")

    @classmethod
    def for_clusters(cls, n_clusters, n_layers=3, **kwargs):
        """Config with every layer of width ``n_clusters + 1``."""
        return cls(layer_dims=(n_clusters + 1,) * n_layers, **kwargs)

    @property
    def n_layers(self):
        return len(self.layer_dims)

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "max_iters": self.max_iters,
            "layer_dims": list(self.layer_dims),
            "seed": self.seed,
            "delta": self.delta,
            "eps_div": self.eps_div,
            "warm_start": self.warm_start,
        }


@dataclass
class TraceRow:
    iter: int
    objective: float
    delta_v: float


@dataclass
class FactorState:
    """Mutable state of one run.

    ``W`` holds ``W_1 .. W_l`` for the layers set up so far; ``W_0`` is the
    identity and is never stored. ``dw`` is the diagonal of the reweighting
    matrix that turns the L2,1 penalty into a quadratic.
    """

    X: np.ndarray
    E: np.ndarray
    W: list
    V: np.ndarray
    S: np.ndarray
    dw: np.ndarray
    layer: int
    rng: np.random.Generator = field(repr=False)
    traces: dict = field(default_factory=dict)

    @property
    def n_samples(self):
        return self.X.shape[1]

    @property
    def trace(self):
        return self.traces.setdefault(self.layer, [])


@dataclass
class TrainedModel:
    V_final: np.ndarray
    W: list
    E: np.ndarray
    S: np.ndarray
    traces: dict
    converged: dict
    config: ModelConfig


def _uniform_open_closed(rng, shape):
    # Generator.random draws from [0, 1); flip it to (0, 1]
    return 1.0 - rng.random(shape)


def init_state(X, config):
    """Seeded random ``W_1`` and ``V``; zero ``S`` and ``E``; identity weights."""
    X = as_matrix(X, "X")
    if np.any(X < 0):
        raise ValueError("X must be entrywise nonnegative")
    D, N = X.shape
    if max(config.layer_dims) > N:
        raise BadShape(f"layer width {max(config.layer_dims)} exceeds N = {N}")
    if np.any(~X.any(axis=0)):
        logger.warning("X has %d all-zero columns", int(np.sum(~X.any(axis=0))))
    rng = np.random.default_rng(config.seed)
    r1 = config.layer_dims[0]
    W1 = _uniform_open_closed(rng, (N, r1))
    V = _uniform_open_closed(rng, (r1, N))
    return FactorState(
        X=X,
        E=np.zeros((D, N)),
        W=[W1],
        V=V,
        S=np.zeros((N, N)),
        dw=np.ones(N),
        layer=1,
        rng=rng,
    )


def begin_layer(state, config):
    """Append a random ``W_{l+1}`` and re-initialize ``V`` at the new width.

    With ``config.warm_start`` the new ``V`` is the clamped least-squares
    solution of ``W_{l+1} @ V = V_prev`` instead of a random draw, so the
    coefficient matrix carries over approximately.
    """
    l = state.layer + 1
    if l > config.n_layers:
        raise BadShape(f"config has only {config.n_layers} layers")
    r_prev, r = config.layer_dims[l - 2], config.layer_dims[l - 1]
    W_new = _uniform_open_closed(state.rng, (r_prev, r))
    V_rand = _uniform_open_closed(state.rng, (r, state.n_samples))
    if config.warm_start:
        V_ls = np.linalg.lstsq(W_new, state.V, rcond=None)[0]
        V_rand = np.maximum(V_ls, 1e-3 * V_rand)
    state.W.append(W_new)
    state.V = V_rand
    state.layer = l
    return state


def prefix_product(state, l=None):
    """Return ``W_0 @ W_1 @ ... @ W_{l-1}`` or ``None`` when ``l == 1``.

    ``None`` stands for the ``N x N`` identity; callers branch on it rather
    than materializing the identity.
    """
    l = state.layer if l is None else l
    if not 1 <= l <= len(state.W) + 1:
        raise ValueError(f"layer {l} out of range")
    if l == 1:
        return None
    P = state.W[0]
    for Wk in state.W[1 : l - 1]:
        P = P @ Wk
    return P


def _apply_prefix(P, M):
    return M if P is None else P @ M


def coefficient_product(state):
    """``R = W_1 ... W_l V`` at the current layer, shape ``N x N``."""
    P = prefix_product(state)
    return _apply_prefix(P, state.W[state.layer - 1] @ state.V)


def objective(state, config):
    """Relaxed objective evaluated at the current layer."""
    P = prefix_product(state)
    W = state.W[state.layer - 1]
    V = state.V
    WV = W @ V
    R = _apply_prefix(P, WV)
    Xc = state.X - state.E
    rec = np.sum(np.square(Xc - Xc @ R))
    loc = np.sum(np.square(state.S - R)) + np.sum(np.square(WV))
    selfexp = np.sum(np.square(V - V @ state.S))
    return float(rec + config.alpha * loc + config.beta * selfexp + config.gamma * l21_norm(state.E))


def kernel_parts(state):
    """Positive and negative parts of ``(X - E).T @ (X - E)``."""
    return pos_neg_split(gram(state.X - state.E))


def w_ratio_terms(state, config, kernel=None):
    """Numerator and denominator of the multiplicative ``W_l`` update.

    ``kernel`` may carry a precomputed ``kernel_parts(state)``.
    """
    P = prefix_product(state)
    W = state.W[state.layer - 1]
    V = state.V
    alpha = config.alpha
    Kp, Kn = kernel_parts(state) if kernel is None else kernel
    Sp, Sn = pos_neg_split(state.S)
    VVt = V @ V.T
    if P is None:
        PtKp, PtKn, PtSp, PtSn = Kp, Kn, Sp, Sn
        PtKpP, PtKnP, PtP_W = Kp, Kn, W
    else:
        PtKp, PtKn, PtSp, PtSn = P.T @ Kp, P.T @ Kn, P.T @ Sp, P.T @ Sn
        PtKpP, PtKnP, PtP_W = PtKp @ P, PtKn @ P, (P.T @ P) @ W
    WVVt = W @ VVt
    numer = PtKp @ V.T + PtKnP @ WVVt + alpha * (PtSp @ V.T)
    denom = (
        PtKpP @ WVVt
        + PtKn @ V.T
        + alpha * (PtP_W @ VVt)
        + alpha * WVVt
        + alpha * (PtSn @ V.T)
    )
    return numer, denom


def v_ratio_terms(state, config, kernel=None):
    """Numerator and denominator of the multiplicative ``V`` update."""
    P = prefix_product(state)
    W = state.W[state.layer - 1]
    V = state.V
    N = state.n_samples
    alpha, beta = config.alpha, config.beta
    Kp, Kn = kernel_parts(state) if kernel is None else kernel
    Sp, Sn = pos_neg_split(state.S)
    B = _apply_prefix(P, W)  # deep concept weights, N x r_l
    I_S = np.eye(N) - state.S
    Qp, Qn = pos_neg_split(I_S @ I_S.T)
    BtKp, BtKn = B.T @ Kp, B.T @ Kn
    numer = BtKp + (BtKn @ B) @ V + alpha * (B.T @ Sp) + beta * (V @ Qn)
    denom = (
        (BtKp @ B) @ V
        + BtKn
        + alpha * ((B.T @ B) @ V)
        + alpha * ((W.T @ W) @ V)
        + alpha * (B.T @ Sn)
        + beta * (V @ Qp)
    )
    return numer, denom


def update_W(state, config, kernel=None):
    """Return the multiplicatively updated ``W_l``; ``state`` is not modified."""
    numer, denom = w_ratio_terms(state, config, kernel)
    W = state.W[state.layer - 1]
    if numer.shape != W.shape:
        raise ShapeMismatch(f"W_l is {W.shape}, update terms are {numer.shape}")
    return W * safe_div(numer, denom, config.eps_div)


def update_V(state, config, kernel=None):
    """Return the multiplicatively updated ``V``; ``state`` is not modified."""
    numer, denom = v_ratio_terms(state, config, kernel)
    if numer.shape != state.V.shape:
        raise ShapeMismatch(f"V is {state.V.shape}, update terms are {numer.shape}")
    return state.V * safe_div(numer, denom, config.eps_div)


def update_S(state, config):
    """Closed-form minimizer of ``alpha ||S - R||^2 + beta ||V - V S||^2``.

    Raises
    ------
    NotPositiveDefinite
        When ``alpha == 0`` and ``V.T @ V`` is singular.
    """
    alpha, beta = config.alpha, config.beta
    if not alpha + beta > 0:
        raise ValueError("alpha + beta must be positive to update S")
    V = state.V
    R = coefficient_product(state)
    if alpha > 0:
        # (aI + bV'V)^{-1}(aR + bV'V) = R + b V' F (I - R), F = (aI_r + bVV')^{-1} V,
        # an r x r solve instead of N x N
        G = beta * (V @ V.T)
        G[np.diag_indices_from(G)] += alpha
        F = solve_spd(G, V)
        return R + beta * (V.T @ (F - F @ R))
    VtV = V.T @ V
    return solve_spd(beta * VtV, beta * VtV)


def update_E(state, config):
    """Closed-form error matrix at fixed reweighting ``dw``.

    Minimizes ``||(X - E) Theta||^2 + gamma tr(E diag(dw) E.T)`` with
    ``Theta = I - R``, i.e. ``E = X T (T + gamma diag(dw))^{-1}`` where
    ``T = Theta Theta.T``.
    """
    N = state.n_samples
    Theta = np.eye(N) - coefficient_product(state)
    T = Theta @ Theta.T
    T = 0.5 * (T + T.T)
    A = T.copy()
    A[np.diag_indices_from(A)] += config.gamma * state.dw
    # E A = X T  <=>  A E.T = T X.T  (A and T symmetric)
    return solve_spd(A, T @ state.X.T).T


def update_Dw(E, delta):
    """Reweighting diagonal ``1 / (2 max(||e_i||, delta))``."""
    return 1.0 / (2.0 * np.maximum(column_l2_norms(E), delta))


def train_layer(state, config, callback=None):
    """Optimize the current layer in place.

    ``callback(state)``, if given, runs after every iteration.

    Returns
    -------
    state : FactorState
    converged : bool
        ``False`` when the iteration cap was hit first.
    """
    trace = state.trace
    obj = objective(state, config)
    if not math.isfinite(obj):
        raise Diverged(f"non-finite objective at layer {state.layer} initialization")
    if not trace:
        trace.append(TraceRow(0, obj, float("nan")))
    converged = False
    l = state.layer
    for t in range(1, config.max_iters + 1):
        V_old = state.V
        kernel = kernel_parts(state)
        state.W[l - 1] = update_W(state, config, kernel)
        state.V = update_V(state, config, kernel)
        state.S = update_S(state, config)
        state.E = update_E(state, config)
        state.dw = update_Dw(state.E, config.delta)
        dv = float(np.linalg.norm(state.V - V_old))
        obj = objective(state, config)
        if not math.isfinite(obj):
            raise Diverged(f"non-finite objective at layer {l}, iteration {t}")
        trace.append(TraceRow(t, obj, dv))
        if callback is not None:
            callback(state)
        if dv <= config.epsilon:
            converged = True
            break
    logger.debug("layer %d: %d iterations, objective %.6g", l, len(trace) - 1, obj)
    return state, converged


def train(X, config, callback=None):
    """Train all layers in sequence and return the final representation."""
    state = init_state(X, config)
    converged = {}
    for l in range(1, config.n_layers + 1):
        if l > 1:
            begin_layer(state, config)
        _, converged[l] = train_layer(state, config, callback)
    return TrainedModel(
        V_final=state.V,
        W=list(state.W),
        E=state.E,
        S=state.S,
        traces=state.traces,
        converged=converged,
        config=config,
    )


def coefficient_matrix(model):
    """``R = W_1 @ ... @ W_L @ V_final`` (``N x N``)."""
    R = model.V_final
    for Wk in reversed(model.W):
        R = Wk @ R
    return R
